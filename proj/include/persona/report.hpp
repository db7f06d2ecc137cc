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
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "persona/eval.hpp"

namespace persona {

/// One long-format result line. `trait` is a trait key, "mean", or empty.
struct ReportRow {
  std::string setting;
  std::string method;
  std::string feature;
  std::string trait;
  std::string metric;
  double value = 0.0;
  std::size_t n = 0;
  double p_value = std::nan("");
  std::optional<std::size_t> tweet_count;
  std::optional<std::size_t> replicate;

  /// Field-wise equality; NaN equals NaN.
  friend bool operator==(const ReportRow& a, const ReportRow& b);
};

std::vector<ReportRow> to_rows(const EvalReport& report);
std::vector<ReportRow> to_rows(const SamplingReport& report);
std::vector<ReportRow> to_rows(const RealLifeReport& report);

/// Header `setting,method,feature,trait,metric,value,n,p_value`, plus
/// `tweet_count,replicate` when any row carries them. Fields may not contain
/// commas, quotes or line breaks.
std::string format_csv(std::span<const ReportRow> rows);
std::vector<ReportRow> parse_csv(std::string_view text);

/// `user_id,o,c,e,a,n`, one line per user.
std::string format_predictions(std::span<const std::string> user_ids, const Eigen::MatrixXd& predictions);

struct PredictionTable {
  std::vector<std::string> user_ids;
  Eigen::MatrixXd values;
};
PredictionTable parse_predictions(std::string_view text);

/// Plain-text summary for terminals.
std::string summarize(const EvalReport& report);
std::string summarize(const SamplingReport& report);
std::string summarize(const RealLifeReport& report);

}  // namespace persona
