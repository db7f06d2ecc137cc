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

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "persona/embedding.hpp"
#include "persona/lexicon.hpp"
#include "persona/ngram.hpp"

namespace persona {

struct CoverageEntry {
  std::string label;  ///< "tokens", or "order1".."order3" for n-grams
  std::uint64_t covered = 0;
  std::uint64_t total = 0;
  double fraction = 0.0;  ///< covered / total, 0 when total is 0
};

struct CoverageReport {
  std::string extractor;  ///< "embedding", "lexicon" or "ngram"
  std::vector<CoverageEntry> entries;
};

/// Fraction of token occurrences that have a vector.
CoverageReport coverage_report(std::span<const TokenStream> streams, const EmbeddingTable& table);
/// Fraction of token occurrences matching at least one category.
CoverageReport coverage_report(std::span<const TokenStream> streams, const Lexicon& lex);
/// Per order, fraction of n-gram instances that are in the vocabulary.
CoverageReport coverage_report(std::span<const TokenStream> streams, const NgramVocab& vocab);

}  // namespace persona
