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

#include "persona/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "persona/error.hpp"

namespace persona {
namespace {

// Continued fraction for I_x(a,b), modified Lentz. Converges quickly for
// x < (a+1)/(a+b+2).
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIter = 10000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw NumericalError("incomplete beta continued fraction did not converge");
}

void require_same_length(std::span<const double> a, std::span<const double> b, const char* what) {
  if (a.size() != b.size()) {
    throw DataError(std::string(what) + ": length mismatch (" + std::to_string(a.size()) + " vs " +
                    std::to_string(b.size()) + ")");
  }
}

bool is_constant(std::span<const double> v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *lo == *hi;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw DataError("incomplete_beta needs a, b > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw DataError("incomplete_beta needs x in [0,1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                           b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_tailed(double t, double df) {
  if (!(df > 0.0)) throw DataError("t distribution needs df > 0");
  if (std::isinf(t)) return 0.0;
  if (std::isnan(t)) throw DataError("t statistic is NaN");
  return std::clamp(incomplete_beta(0.5 * df, 0.5, df / (df + t * t)), 0.0, 1.0);
}

double f_upper_tail(double f, double df1, double df2) {
  if (!(df1 > 0.0) || !(df2 > 0.0)) throw DataError("F distribution needs positive df");
  if (std::isnan(f)) throw DataError("F statistic is NaN");
  if (f <= 0.0) return 1.0;
  if (std::isinf(f)) return 0.0;
  return std::clamp(incomplete_beta(0.5 * df2, 0.5 * df1, df2 / (df2 + df1 * f)), 0.0, 1.0);
}

double mean(std::span<const double> v) {
  if (v.empty()) throw DataError("mean of an empty series");
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

PearsonResult pearson(std::span<const double> pred, std::span<const double> actual) {
  require_same_length(pred, actual, "pearson");
  if (pred.size() < 2) throw DataError("pearson needs at least 2 pairs");
  if (is_constant(pred) || is_constant(actual)) throw DataError("undefined correlation: constant series");
  const double mx = mean(pred);
  const double my = mean(actual);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double dx = pred[i] - mx;
    const double dy = actual[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  PearsonResult res;
  res.n = pred.size();
  res.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  if (res.n < 3) {
    res.p_value = std::numeric_limits<double>::quiet_NaN();
  } else {
    const double df = static_cast<double>(res.n - 2);
    const double one_minus = 1.0 - res.r * res.r;
    res.p_value = one_minus <= 0.0 ? 0.0
                                   : student_t_two_tailed(res.r * std::sqrt(df / one_minus), df);
  }
  return res;
}

double mae(std::span<const double> pred, std::span<const double> actual) {
  require_same_length(pred, actual, "mae");
  if (pred.empty()) throw DataError("mae needs at least one pair");
  double s = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) s += std::abs(pred[i] - actual[i]);
  return s / static_cast<double>(pred.size());
}

AnovaResult anova_oneway(const std::vector<std::vector<double>>& groups) {
  if (groups.size() < 2) throw DataError("ANOVA needs at least two groups");
  std::size_t n = 0;
  double grand = 0.0;
  for (const auto& g : groups) {
    if (g.size() < 2) throw DataError("ANOVA needs at least two values per group");
    n += g.size();
    for (double x : g) grand += x;
  }
  grand /= static_cast<double>(n);
  double ssb = 0.0, ssw = 0.0;
  bool all_constant = true;
  for (const auto& g : groups) {
    const double m = mean(g);
    ssb += static_cast<double>(g.size()) * (m - grand) * (m - grand);
    for (double x : g) ssw += (x - m) * (x - m);
    all_constant = all_constant && is_constant(g);
  }
  if (all_constant || !(ssw > 0.0)) throw DataError("ANOVA undefined: zero within-group variance");
  AnovaResult res;
  res.df_between = groups.size() - 1;
  res.df_within = n - groups.size();
  res.f = (ssb / static_cast<double>(res.df_between)) / (ssw / static_cast<double>(res.df_within));
  res.p_value = f_upper_tail(res.f, static_cast<double>(res.df_between), static_cast<double>(res.df_within));
  return res;
}

TTestResult paired_ttest(std::span<const double> a, std::span<const double> b) {
  require_same_length(a, b, "paired t-test");
  if (a.size() < 2) throw DataError("paired t-test needs at least 2 pairs");
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  if (is_constant(d)) throw DataError("paired t-test undefined: differences have zero variance");
  const double md = mean(d);
  double ss = 0.0;
  for (double x : d) ss += (x - md) * (x - md);
  const double n = static_cast<double>(d.size());
  const double sd = std::sqrt(ss / (n - 1.0));
  TTestResult res;
  res.df = d.size() - 1;
  res.t = md / (sd / std::sqrt(n));
  res.p_value = student_t_two_tailed(res.t, static_cast<double>(res.df));
  if (!is_constant(a) && !is_constant(b)) res.correlation = pearson(a, b).r;
  return res;
}

}  // namespace persona
