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

#include "persona/eval.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

#include "persona/error.hpp"
#include "persona/io.hpp"
#include "persona/rng.hpp"

namespace persona {
namespace {

FeatureOptions feature_options(const MethodSpec& m, const EvalConfig& c) {
  FeatureOptions o;
  o.kind = m.feature;
  o.oov = c.oov;
  o.ngram = c.ngram;
  o.clean = c.clean;
  return o;
}

Eigen::MatrixXd trait_matrix(std::span<const UserRecord> records) {
  Eigen::MatrixXd Y(static_cast<Eigen::Index>(records.size()), static_cast<Eigen::Index>(kNumTraits));
  for (std::size_t i = 0; i < records.size(); ++i) {
    for (std::size_t t = 0; t < kNumTraits; ++t) {
      Y(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t)) = records[i].traits.values[t];
    }
  }
  return Y;
}

std::vector<double> column(const Eigen::MatrixXd& M, std::size_t c) {
  const auto col = M.col(static_cast<Eigen::Index>(c));
  return {col.data(), col.data() + col.size()};
}

std::vector<CoverageReport> corpus_coverage(std::span<const TokenizedUser> users, std::span<const MethodSpec> methods,
                                            const FeatureResources& res, const EvalConfig& config) {
  std::vector<TokenStream> streams;
  streams.reserve(users.size());
  for (const auto& u : users) streams.push_back(u.all);
  std::vector<CoverageReport> out;
  for (FeatureKind kind : {FeatureKind::lexicon, FeatureKind::ngram, FeatureKind::embedding}) {
    const bool used = std::any_of(methods.begin(), methods.end(), [&](const MethodSpec& m) { return m.feature == kind; });
    if (!used) continue;
    try {
      switch (kind) {
        case FeatureKind::embedding:
          if (res.embeddings) out.push_back(coverage_report(streams, *res.embeddings));
          break;
        case FeatureKind::lexicon:
          if (res.lexicon) out.push_back(coverage_report(streams, *res.lexicon));
          break;
        case FeatureKind::ngram:
          out.push_back(coverage_report(streams, build_ngram_vocab(streams, config.ngram)));
          break;
      }
    } catch (const DataError&) {
      // Corpora without any tokens have no defined coverage.
    }
  }
  return out;
}

std::vector<TokenStream> gather_streams(std::span<const TokenizedUser> users, std::span<const std::size_t> idx) {
  std::vector<TokenStream> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(users[i].all);
  return out;
}

}  // namespace

std::string MethodSpec::label() const {
  return std::string(to_string(feature)) + "+" + std::string(to_string(model));
}

std::optional<MethodSpec> method_from_label(std::string_view label) {
  const auto plus = label.find('+');
  if (plus == std::string_view::npos) return std::nullopt;
  auto f = feature_kind_from_string(label.substr(0, plus));
  auto m = model_kind_from_string(label.substr(plus + 1));
  if (!f || !m) return std::nullopt;
  return MethodSpec{*f, *m};
}

std::vector<MethodSpec> comparison_methods() {
  return {{FeatureKind::lexicon, ModelKind::ridge},   {FeatureKind::ngram, ModelKind::ridge},
          {FeatureKind::embedding, ModelKind::ridge}, {FeatureKind::lexicon, ModelKind::gp},
          {FeatureKind::ngram, ModelKind::gp},        {FeatureKind::embedding, ModelKind::gp}};
}

SplitPlan make_folds(std::size_t n_users, std::size_t k, double val_fraction, std::uint64_t seed) {
  if (k < 2) throw DataError("need at least 2 folds");
  if (n_users < k) {
    throw DataError("cannot make " + std::to_string(k) + " folds from " + std::to_string(n_users) + " users");
  }
  if (!(val_fraction > 0.0 && val_fraction < 1.0)) throw DataError("validation fraction must be in (0,1)");

  std::vector<std::size_t> order(n_users);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(derive_seed({seed, 0xf01dULL}));
  for (std::size_t i = n_users - 1; i > 0; --i) std::swap(order[i], order[rng.below(i + 1)]);

  SplitPlan plan;
  plan.seed = seed;
  const std::size_t base = n_users / k;
  const std::size_t extra = n_users % k;
  std::size_t pos = 0;
  std::vector<std::size_t> fold_of(n_users);
  std::vector<std::vector<std::size_t>> tests(k);
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t size = base + (f < extra ? 1 : 0);
    tests[f].assign(order.begin() + static_cast<std::ptrdiff_t>(pos),
                    order.begin() + static_cast<std::ptrdiff_t>(pos + size));
    std::sort(tests[f].begin(), tests[f].end());
    for (auto u : tests[f]) fold_of[u] = f;
    pos += size;
  }
  for (std::size_t f = 0; f < k; ++f) {
    Fold fold;
    fold.test = tests[f];
    std::vector<std::size_t> side;
    for (std::size_t u = 0; u < n_users; ++u) {
      if (fold_of[u] != f) side.push_back(u);
    }
    Rng frng(derive_seed({seed, 0xf01dULL, f}));
    for (std::size_t i = side.size(); i > 1; --i) std::swap(side[i - 1], side[frng.below(i)]);
    auto v = static_cast<std::size_t>(std::llround(val_fraction * static_cast<double>(side.size())));
    v = std::min(v, side.size() > 0 ? side.size() - 1 : 0);
    fold.validation.assign(side.end() - static_cast<std::ptrdiff_t>(v), side.end());
    fold.train.assign(side.begin(), side.end() - static_cast<std::ptrdiff_t>(v));
    std::sort(fold.train.begin(), fold.train.end());
    std::sort(fold.validation.begin(), fold.validation.end());
    plan.folds.push_back(std::move(fold));
  }
  return plan;
}

std::string index_fingerprint(std::span<const std::size_t> indices) {
  std::vector<std::size_t> sorted(indices.begin(), indices.end());
  std::sort(sorted.begin(), sorted.end());
  Fnv1a h;
  for (auto i : sorted) h.u64(i);
  return hex64(h.value());
}

TraitModelBundle train_method(const MethodSpec& method, std::span<const TokenizedUser> users,
                              std::span<const UserRecord> records, std::span<const std::size_t> train,
                              std::span<const std::size_t> validation, const FeatureResources& res,
                              const EvalConfig& config, std::uint64_t seed) {
  std::vector<std::size_t> side(train.begin(), train.end());
  side.insert(side.end(), validation.begin(), validation.end());
  const auto streams = gather_streams(users, side);
  auto featurizer = Featurizer::fit(feature_options(method, config), res, streams);
  const Eigen::MatrixXd X = featurizer.transform_rows(streams);
  std::vector<TraitScores> traits;
  traits.reserve(side.size());
  for (auto i : side) traits.push_back(records[i].traits);
  std::vector<std::size_t> val_rows(validation.size());
  std::iota(val_rows.begin(), val_rows.end(), train.size());
  TrainConfig tc = config.train;
  tc.seed = seed;
  auto bundle = train_big5(X, traits, method.model, tc, val_rows);
  bundle.featurizer = std::move(featurizer);
  return bundle;
}

EvalReport run_full_setting(const Corpus& corpus, std::span<const MethodSpec> methods, const FeatureResources& res,
                            const EvalConfig& config) {
  const auto plan = make_folds(corpus.size(), config.folds, config.val_fraction, config.seed);
  const auto users = tokenize_corpus(corpus, config.clean);
  const Eigen::MatrixXd actual = trait_matrix(corpus);

  EvalReport report;
  report.n_users = corpus.size();
  for (const auto& method : methods) {
    MethodResult mr;
    mr.method = method;
    mr.predictions = Eigen::MatrixXd::Constant(actual.rows(), actual.cols(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t f = 0; f < plan.folds.size(); ++f) {
      const auto& fold = plan.folds[f];
      std::vector<std::size_t> side(fold.train);
      side.insert(side.end(), fold.validation.begin(), fold.validation.end());
      mr.fold_fingerprints.push_back(index_fingerprint(side));
      const auto bundle = train_method(method, users, corpus, fold.train, fold.validation, res, config,
                                       derive_seed({config.seed, f}));
      const auto test_streams = gather_streams(users, fold.test);
      const Eigen::MatrixXd pred = bundle.predict_rows(bundle.featurizer->transform_rows(test_streams));
      for (std::size_t i = 0; i < fold.test.size(); ++i) {
        mr.predictions.row(static_cast<Eigen::Index>(fold.test[i])) = pred.row(static_cast<Eigen::Index>(i));
      }
    }
    double r_sum = 0.0, mae_sum = 0.0;
    for (std::size_t t = 0; t < kNumTraits; ++t) {
      const auto p = column(mr.predictions, t);
      const auto a = column(actual, t);
      mr.traits[t].pearson = pearson(p, a);
      mr.traits[t].mae = mae(p, a);
      r_sum += mr.traits[t].pearson.r;
      mae_sum += mr.traits[t].mae;
    }
    mr.mean_r = r_sum / static_cast<double>(kNumTraits);
    mr.mean_mae = mae_sum / static_cast<double>(kNumTraits);
    report.methods.push_back(std::move(mr));
  }
  report.coverage = corpus_coverage(users, methods, res, config);
  return report;
}

std::vector<std::size_t> sample_tweets(std::size_t n_tweets, std::size_t count, std::uint64_t seed,
                                       std::size_t user, std::size_t replicate) {
  if (count > n_tweets) {
    throw DataError("cannot sample " + std::to_string(count) + " tweets from a user with " +
                    std::to_string(n_tweets));
  }
  std::vector<std::size_t> idx(n_tweets);
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(derive_seed({seed, 0x5a3bULL, user, count, replicate}));
  for (std::size_t i = 0; i < count; ++i) std::swap(idx[i], idx[i + rng.below(n_tweets - i)]);
  idx.resize(count);
  std::sort(idx.begin(), idx.end());
  return idx;
}

SamplingReport run_sampling_setting(const Corpus& corpus, std::span<const MethodSpec> methods,
                                    const FeatureResources& res, const EvalConfig& config,
                                    const SamplingConfig& sampling) {
  const auto& counts = sampling.tweet_counts;
  if (counts.empty()) throw DataError("sampling needs at least one tweet count");
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] == 0 || (i > 0 && counts[i] <= counts[i - 1])) {
      throw DataError("tweet counts must be strictly increasing positive integers");
    }
  }
  if (sampling.n_subsets < 1) throw DataError("sampling needs at least one subset per count");
  for (const auto& rec : corpus) {
    if (rec.tweets.size() < counts.back()) {
      throw DataError("user '" + rec.user_id + "' has " + std::to_string(rec.tweets.size()) +
                      " tweets, fewer than the largest sample size " + std::to_string(counts.back()));
    }
  }

  const auto plan = make_folds(corpus.size(), config.folds, config.val_fraction, config.seed);
  const auto users = tokenize_corpus(corpus, config.clean);
  const Eigen::MatrixXd actual = trait_matrix(corpus);
  const auto n = static_cast<Eigen::Index>(corpus.size());
  const std::size_t n_counts = counts.size();
  const std::size_t n_rep = sampling.n_subsets;

  SamplingReport report;
  report.n_users = corpus.size();
  report.n_subsets = n_rep;
  for (const auto& method : methods) {
    // preds[c * n_rep + s] holds users x traits predictions.
    std::vector<Eigen::MatrixXd> preds(n_counts * n_rep, Eigen::MatrixXd(n, static_cast<Eigen::Index>(kNumTraits)));
    for (std::size_t f = 0; f < plan.folds.size(); ++f) {
      const auto& fold = plan.folds[f];
      const auto bundle = train_method(method, users, corpus, fold.train, fold.validation, res, config,
                                       derive_seed({config.seed, f}));
      const auto& feat = *bundle.featurizer;
      for (auto u : fold.test) {
        const auto& tweets = users[u].tweets;
        Eigen::MatrixXd X(static_cast<Eigen::Index>(n_counts * n_rep), feat.dimension());
        std::vector<TokenStream> chosen;
        for (std::size_t c = 0; c < n_counts; ++c) {
          for (std::size_t s = 0; s < n_rep; ++s) {
            chosen.clear();
            for (auto i : sample_tweets(tweets.size(), counts[c], config.seed, u, s)) chosen.push_back(tweets[i]);
            X.row(static_cast<Eigen::Index>(c * n_rep + s)) = feat.transform(concat(chosen)).values.transpose();
          }
        }
        const Eigen::MatrixXd P = bundle.predict_rows(X);
        for (std::size_t k = 0; k < n_counts * n_rep; ++k) {
          preds[k].row(static_cast<Eigen::Index>(u)) = P.row(static_cast<Eigen::Index>(k));
        }
      }
    }

    SamplingCurve curve;
    curve.method = method;
    for (std::size_t c = 0; c < n_counts; ++c) {
      SamplingPoint pt;
      pt.tweet_count = counts[c];
      pt.replicate_r.resize(n_rep);
      pt.replicate_trait_r.resize(n_rep);
      Eigen::MatrixXd avg = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(kNumTraits));
      for (std::size_t s = 0; s < n_rep; ++s) {
        const auto& P = preds[c * n_rep + s];
        avg += P;
        double sum = 0.0;
        for (std::size_t t = 0; t < kNumTraits; ++t) {
          const double r = pearson(column(P, t), column(actual, t)).r;
          pt.replicate_trait_r[s][t] = r;
          sum += r;
        }
        pt.replicate_r[s] = sum / static_cast<double>(kNumTraits);
      }
      if (sampling.aggregation == SamplingAggregation::per_replicate) {
        for (std::size_t t = 0; t < kNumTraits; ++t) {
          double sum = 0.0;
          for (std::size_t s = 0; s < n_rep; ++s) sum += pt.replicate_trait_r[s][t];
          pt.trait_r[t] = sum / static_cast<double>(n_rep);
        }
        pt.mean_r = mean(pt.replicate_r);
      } else {
        avg /= static_cast<double>(n_rep);
        double sum = 0.0;
        for (std::size_t t = 0; t < kNumTraits; ++t) {
          pt.trait_r[t] = pearson(column(avg, t), column(actual, t)).r;
          sum += pt.trait_r[t];
        }
        pt.mean_r = sum / static_cast<double>(kNumTraits);
      }
      curve.points.push_back(std::move(pt));
    }
    report.curves.push_back(std::move(curve));
  }
  return report;
}

RealLifeReport run_reallife_setting(const Corpus& train_corpus, const Corpus& test_corpus,
                                    std::span<const MethodSpec> methods, const FeatureResources& res,
                                    const EvalConfig& config) {
  if (methods.size() < 2) throw DataError("the real-life setting compares at least two methods");
  if (test_corpus.size() < 2) throw DataError("the real-life setting needs at least two test users");
  std::unordered_set<std::string> train_ids;
  for (const auto& r : train_corpus) train_ids.insert(r.user_id);
  for (const auto& r : test_corpus) {
    if (train_ids.contains(r.user_id)) {
      throw DataError("user '" + r.user_id + "' appears in both the training and the test corpus");
    }
  }
  const auto n_train = train_corpus.size();
  if (n_train < 2) throw DataError("the real-life setting needs at least two training users");

  std::vector<std::size_t> order(n_train);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(derive_seed({config.seed, 0x7e57ULL}));
  for (std::size_t i = n_train - 1; i > 0; --i) std::swap(order[i], order[rng.below(i + 1)]);
  auto v = static_cast<std::size_t>(std::llround(config.val_fraction * static_cast<double>(n_train)));
  v = std::min(v, n_train - 1);
  std::vector<std::size_t> validation(order.end() - static_cast<std::ptrdiff_t>(v), order.end());
  std::vector<std::size_t> train(order.begin(), order.end() - static_cast<std::ptrdiff_t>(v));
  std::sort(train.begin(), train.end());
  std::sort(validation.begin(), validation.end());

  const auto train_users = tokenize_corpus(train_corpus, config.clean);
  const auto test_users = tokenize_corpus(test_corpus, config.clean);
  std::vector<TokenStream> test_streams;
  for (const auto& u : test_users) test_streams.push_back(u.all);
  const Eigen::MatrixXd actual = trait_matrix(test_corpus);

  RealLifeReport report;
  report.n_train = n_train;
  report.n_test = test_corpus.size();
  std::vector<std::vector<double>> groups;
  for (const auto& method : methods) {
    const auto bundle =
        train_method(method, train_users, train_corpus, train, validation, res, config, derive_seed({config.seed}));
    RealLifeMethodResult mr;
    mr.method = method;
    mr.predictions = bundle.predict_rows(bundle.featurizer->transform_rows(test_streams));
    const Eigen::MatrixXd err = (mr.predictions - actual).cwiseAbs();
    mr.user_errors.resize(test_corpus.size());
    for (Eigen::Index i = 0; i < err.rows(); ++i) mr.user_errors[static_cast<std::size_t>(i)] = err.row(i).mean();
    for (std::size_t t = 0; t < kNumTraits; ++t) mr.trait_mae[t] = err.col(static_cast<Eigen::Index>(t)).mean();
    mr.mae = mean(mr.user_errors);
    groups.push_back(mr.user_errors);
    report.methods.push_back(std::move(mr));
  }
  report.anova = anova_oneway(groups);

  std::vector<std::size_t> rank(report.methods.size());
  std::iota(rank.begin(), rank.end(), 0);
  std::stable_sort(rank.begin(), rank.end(),
                   [&](std::size_t a, std::size_t b) { return report.methods[a].mae < report.methods[b].mae; });
  report.best = rank[0];
  report.second = rank[1];
  report.ttest = paired_ttest(report.methods[report.best].user_errors, report.methods[report.second].user_errors);
  return report;
}

}  // namespace persona
