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

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace persona {

/// Regularized incomplete beta I_x(a, b) for a, b > 0 and x in [0, 1].
double incomplete_beta(double a, double b, double x);

/// Two-tailed p-value of a Student t statistic with `df` degrees of freedom.
double student_t_two_tailed(double t, double df);

/// Upper tail P(F > f) of the F distribution with (df1, df2) degrees of freedom.
double f_upper_tail(double f, double df1, double df2);

struct PearsonResult {
  double r = 0.0;
  double p_value = 0.0;  ///< NaN when n < 3
  std::size_t n = 0;
};

/// Product-moment correlation; throws DataError for constant series.
PearsonResult pearson(std::span<const double> pred, std::span<const double> actual);

double mae(std::span<const double> pred, std::span<const double> actual);

struct AnovaResult {
  double f = 0.0;
  std::size_t df_between = 0;
  std::size_t df_within = 0;
  double p_value = 1.0;
};

AnovaResult anova_oneway(const std::vector<std::vector<double>>& groups);

struct TTestResult {
  double t = 0.0;
  std::size_t df = 0;
  double p_value = 1.0;
  std::optional<double> correlation;  ///< pearson(a, b).r when defined
};

/// Paired t-test on the differences a - b.
TTestResult paired_ttest(std::span<const double> a, std::span<const double> b);

double mean(std::span<const double> v);

}  // namespace persona
