// Copyright 2026 The persona Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Core>
#include <cstddef>

namespace persona {

/// Output of every extractor. `covered_tokens` counts token occurrences the
/// extractor recognised; `total_tokens` is the stream length.
struct FeatureVector {
  Eigen::VectorXd values;
  std::size_t covered_tokens = 0;
  std::size_t total_tokens = 0;
};

enum class OovPolicy {
  error,       ///< throw NoCoveredTokensError when nothing is covered
  zero_vector  ///< substitute the zero vector
};

}  // namespace persona
