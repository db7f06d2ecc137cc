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

#include <gtest/gtest.h>

#include <algorithm>
#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>

#include "persona/error.hpp"
#include "persona/stats.hpp"
#include "test_util.hpp"

using namespace persona;

TEST(IncompleteBeta, MatchesBoost) {
  Rng rng(1);
  for (int i = 0; i < 500; ++i) {
    const double a = std::exp(rng.uniform(std::log(0.05), std::log(200.0)));
    const double b = std::exp(rng.uniform(std::log(0.05), std::log(200.0)));
    const double x = rng.uniform();
    EXPECT_NEAR(incomplete_beta(a, b, x), boost::math::ibeta(a, b, x), 1e-10) << a << " " << b << " " << x;
  }
  EXPECT_EQ(incomplete_beta(2, 3, 0), 0.0);
  EXPECT_EQ(incomplete_beta(2, 3, 1), 1.0);
}

TEST(TailProbabilities, MatchBoostDistributions) {
  Rng rng(2);
  for (int i = 0; i < 200; ++i) {
    const double df = 1 + static_cast<double>(rng.below(200));
    const double t = rng.uniform(-6, 6);
    boost::math::students_t st(df);
    EXPECT_NEAR(student_t_two_tailed(t, df), 2 * boost::math::cdf(boost::math::complement(st, std::abs(t))), 1e-10);
    const double d2 = 1 + static_cast<double>(rng.below(300));
    const double f = rng.uniform(0, 10);
    boost::math::fisher_f fd(df, d2);
    EXPECT_NEAR(f_upper_tail(f, df, d2), boost::math::cdf(boost::math::complement(fd, f)), 1e-10);
  }
}

TEST(Pearson, ReferenceValue) {
  const std::vector<double> a = {1, 2, 3, 4}, b = {1, 3, 2, 4};
  const auto r = pearson(a, b);
  EXPECT_NEAR(r.r, 0.8, 1e-15);
  EXPECT_NEAR(r.p_value, 0.2, 1e-12);
  EXPECT_EQ(r.n, 4u);
}

TEST(Pearson, SmallSamplesHaveNoPValue) {
  const std::vector<double> a = {1, 2}, b = {2, 5};
  const auto r = pearson(a, b);
  EXPECT_NEAR(r.r, 1.0, 1e-15);
  EXPECT_TRUE(std::isnan(r.p_value));
}

TEST(Pearson, ErrorsOnConstantOrMismatched) {
  const std::vector<double> a = {1, 1, 1}, b = {1, 2, 3}, c = {1, 2};
  EXPECT_THROW(pearson(a, b), DataError);
  EXPECT_THROW(pearson(b, c), DataError);
}

TEST(Pearson, InvariantUnderAffineMapsAndJointPermutation) {
  Rng rng(3);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 3 + rng.below(30);
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = rng.normal();
      y[i] = 0.5 * x[i] + rng.normal();
    }
    const double r = pearson(x, y).r;
    const double a = rng.uniform(0.1, 10), b = rng.uniform(-5, 5);
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) xs[i] = a * x[i] + b;
    ASSERT_NEAR(pearson(xs, y).r, r, 1e-12);
    for (std::size_t i = 0; i < n; ++i) xs[i] = -a * x[i] + b;
    ASSERT_NEAR(pearson(xs, y).r, -r, 1e-12);
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    for (std::size_t i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
    std::vector<double> xp(n), yp(n);
    for (std::size_t i = 0; i < n; ++i) {
      xp[i] = x[perm[i]];
      yp[i] = y[perm[i]];
    }
    ASSERT_NEAR(pearson(xp, yp).r, r, 1e-12);
    ASSERT_NEAR(pearson(y, x).r, r, 1e-12);
  }
}

TEST(Mae, HandValue) {
  const std::vector<double> p = {0.5, 0.2, 0.9}, a = {0.4, 0.4, 0.9};
  EXPECT_NEAR(mae(p, a), 0.1, 1e-15);
}

TEST(Anova, ReferenceValue) {
  const auto r = anova_oneway({{1, 2}, {2, 3}});
  EXPECT_NEAR(r.f, 2.0, 1e-14);
  EXPECT_EQ(r.df_between, 1u);
  EXPECT_EQ(r.df_within, 2u);
  EXPECT_NEAR(r.p_value, 0.2928932188134525, 1e-12);
}

TEST(Anova, UnequalGroupsMatchScipy) {
  const auto r = anova_oneway({{0.1, 0.2, 0.3}, {0.2, 0.25, 0.5}, {0.4, 0.45, 0.2, 0.6}});
  EXPECT_NEAR(r.f, 1.7656716417910445, 1e-12);
  EXPECT_EQ(r.df_between, 2u);
  EXPECT_EQ(r.df_within, 7u);
  EXPECT_NEAR(r.p_value, 0.23941422293617293, 1e-10);
}

TEST(Anova, DegreesOfFreedomForThreeMethodsOn55Users) {
  Rng rng(4);
  std::vector<std::vector<double>> g(3, std::vector<double>(55));
  for (auto& v : g) {
    for (auto& x : v) x = rng.uniform();
  }
  const auto r = anova_oneway(g);
  EXPECT_EQ(r.df_between, 2u);
  EXPECT_EQ(r.df_within, 162u);
}

TEST(Anova, IdenticalGroupsGiveZeroF) {
  const auto r = anova_oneway({{1, 2, 3}, {1, 2, 3}});
  EXPECT_EQ(r.f, 0.0);
  EXPECT_NEAR(r.p_value, 1.0, 1e-12);
}

TEST(Anova, RejectsDegenerateInput) {
  EXPECT_THROW(anova_oneway({{1, 2}}), DataError);
  EXPECT_THROW(anova_oneway({{1, 2}, {3}}), DataError);
  EXPECT_THROW(anova_oneway({{1, 1}, {2, 2}}), DataError);
}

TEST(PairedTTest, SymmetricDifferencesGiveZero) {
  const std::vector<double> a = {1, 2, 3}, b = {2, 2, 2};
  const auto r = paired_ttest(a, b);
  EXPECT_NEAR(r.t, 0.0, 1e-15);
  EXPECT_EQ(r.df, 2u);
  EXPECT_NEAR(r.p_value, 1.0, 1e-12);
}

TEST(PairedTTest, MatchesScipy) {
  const std::vector<double> a = {1, 2, 3, 5}, b = {1.5, 2.2, 2.1, 4.0};
  const auto r = paired_ttest(a, b);
  EXPECT_NEAR(r.t, 0.7878385971583352, 1e-12);
  EXPECT_NEAR(r.p_value, 0.4883039970142519, 1e-10);
  ASSERT_TRUE(r.correlation.has_value());
}

TEST(PairedTTest, ConstantDifferencesAreAnError) {
  const std::vector<double> a = {1, 2, 3}, b = {0, 1, 2};
  EXPECT_THROW(paired_ttest(a, b), DataError);
}
