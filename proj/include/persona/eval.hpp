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
#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "persona/bundle.hpp"
#include "persona/corpus.hpp"
#include "persona/coverage.hpp"
#include "persona/featurizer.hpp"
#include "persona/stats.hpp"

namespace persona {

struct MethodSpec {
  FeatureKind feature = FeatureKind::embedding;
  ModelKind model = ModelKind::gp;

  /// "embedding+gp" style label.
  std::string label() const;
  friend bool operator==(const MethodSpec&, const MethodSpec&) = default;
};

std::optional<MethodSpec> method_from_label(std::string_view label);

/// The six feature x model rows of the comparison table, ridge rows first.
std::vector<MethodSpec> comparison_methods();

struct Fold {
  std::vector<std::size_t> test;
  std::vector<std::size_t> train;       ///< fitting part of the training side
  std::vector<std::size_t> validation;  ///< tuning part of the training side
};

struct SplitPlan {
  std::uint64_t seed = 0;
  std::vector<Fold> folds;
};

/// Seeded k-fold partition; each training side is further split so that
/// validation holds round(val_fraction * training-side size) users.
SplitPlan make_folds(std::size_t n_users, std::size_t k, double val_fraction, std::uint64_t seed);

enum class SamplingAggregation {
  per_replicate,       ///< correlation per replicate, then mean
  average_predictions  ///< average each user's predictions over replicates first
};

struct EvalConfig {
  std::size_t folds = 10;
  double val_fraction = 0.25;
  std::uint64_t seed = 0;
  OovPolicy oov = OovPolicy::error;
  NgramOptions ngram;
  CleanOptions clean;
  TrainConfig train;
};

struct TraitMetrics {
  PearsonResult pearson;
  double mae = 0.0;
};

struct MethodResult {
  MethodSpec method;
  std::array<TraitMetrics, kNumTraits> traits;
  double mean_r = 0.0;    ///< mean of the five per-trait r
  double mean_mae = 0.0;  ///< mean of the five per-trait MAE
  Eigen::MatrixXd predictions;  ///< pooled out-of-fold, users x traits
  std::vector<std::string> fold_fingerprints;  ///< hash of each fold's training side
};

struct EvalReport {
  std::size_t n_users = 0;
  std::vector<MethodResult> methods;
  std::vector<CoverageReport> coverage;
};

/// Hash of a set of training indices, as recorded per fold.
std::string index_fingerprint(std::span<const std::size_t> indices);

/// Trains one method on the given users (vocabulary, standardizer and
/// hyperparameters all come from `train` + `validation` only).
TraitModelBundle train_method(const MethodSpec& method, std::span<const TokenizedUser> users,
                              std::span<const UserRecord> records, std::span<const std::size_t> train,
                              std::span<const std::size_t> validation, const FeatureResources& res,
                              const EvalConfig& config, std::uint64_t seed);

/// k-fold train/predict over the whole corpus; Pearson and MAE over the pooled
/// out-of-fold predictions.
EvalReport run_full_setting(const Corpus& corpus, std::span<const MethodSpec> methods,
                            const FeatureResources& res, const EvalConfig& config);

struct SamplingConfig {
  std::vector<std::size_t> tweet_counts = {10, 25, 50, 75, 100, 150, 200};
  std::size_t n_subsets = 20;
  SamplingAggregation aggregation = SamplingAggregation::per_replicate;
};

struct SamplingPoint {
  std::size_t tweet_count = 0;
  double mean_r = 0.0;  ///< headline value (per the configured aggregation)
  std::array<double, kNumTraits> trait_r{};
  std::vector<double> replicate_r;  ///< per replicate, mean over traits
  std::vector<std::array<double, kNumTraits>> replicate_trait_r;
};

struct SamplingCurve {
  MethodSpec method;
  std::vector<SamplingPoint> points;
};

struct SamplingReport {
  std::size_t n_users = 0;
  std::size_t n_subsets = 0;
  std::vector<SamplingCurve> curves;
};

/// Trains per fold on full users, then re-featurizes each test user from
/// random tweet subsets of each size.
SamplingReport run_sampling_setting(const Corpus& corpus, std::span<const MethodSpec> methods,
                                    const FeatureResources& res, const EvalConfig& config,
                                    const SamplingConfig& sampling);

/// Sorted indices of a `count`-tweet subset, drawn without replacement and
/// seeded by (seed, user, count, replicate) only.
std::vector<std::size_t> sample_tweets(std::size_t n_tweets, std::size_t count, std::uint64_t seed,
                                       std::size_t user, std::size_t replicate);

struct RealLifeMethodResult {
  MethodSpec method;
  std::vector<double> user_errors;  ///< per test user, |error| averaged over traits
  double mae = 0.0;                 ///< mean of user_errors
  std::array<double, kNumTraits> trait_mae{};
  Eigen::MatrixXd predictions;
};

struct RealLifeReport {
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  std::vector<RealLifeMethodResult> methods;
  AnovaResult anova;
  TTestResult ttest;
  std::size_t best = 0;    ///< index of the lowest-MAE method
  std::size_t second = 0;  ///< runner-up, compared by the paired t-test
};

/// Trains each method once on `train_corpus` and evaluates on the disjoint
/// `test_corpus`.
RealLifeReport run_reallife_setting(const Corpus& train_corpus, const Corpus& test_corpus,
                                    std::span<const MethodSpec> methods, const FeatureResources& res,
                                    const EvalConfig& config);

}  // namespace persona
