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

#include "persona/bundle.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <limits>
#include <numeric>

#include "persona/error.hpp"
#include "persona/io.hpp"
#include "persona/rng.hpp"

namespace persona {
namespace {

using ordered_json = nlohmann::ordered_json;
using json = nlohmann::json;

// JSON has no infinities; the only non-finite value a bundle can hold is a
// zero noise variance (log = -inf).
ordered_json encode_real(double v) {
  if (std::isfinite(v)) return v;
  if (v == -std::numeric_limits<double>::infinity()) return "-inf";
  if (v == std::numeric_limits<double>::infinity()) return "inf";
  return "nan";
}

double decode_real(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "inf") return std::numeric_limits<double>::infinity();
  }
  throw DataError("bundle: expected a number");
}

ordered_json encode_vector(const Eigen::VectorXd& v) {
  ordered_json a = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(encode_real(v[i]));
  return a;
}

Eigen::VectorXd decode_vector(const json& j) {
  if (!j.is_array()) throw DataError("bundle: expected an array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = decode_real(j[i]);
  return v;
}

ordered_json encode_matrix(const Eigen::MatrixXd& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) rows.push_back(encode_vector(m.row(r).transpose()));
  return rows;
}

Eigen::MatrixXd decode_matrix(const json& j, Eigen::Index cols) {
  if (!j.is_array()) throw DataError("bundle: expected a matrix");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()), cols);
  for (std::size_t r = 0; r < j.size(); ++r) {
    const auto row = decode_vector(j[r]);
    if (row.size() != cols) throw DataError("bundle: ragged matrix");
    m.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  return m;
}

std::uint64_t vector_checksum(const Eigen::VectorXd& v) {
  Fnv1a h;
  for (Eigen::Index i = 0; i < v.size(); ++i) h.f64(v[i]);
  return h.value();
}

const json& require(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw DataError(std::string("bundle: missing '") + key + "'");
  return *it;
}

ordered_json encode_features(const Featurizer& f) {
  const auto& o = f.options();
  ordered_json j;
  j["kind"] = std::string(to_string(o.kind));
  j["oov_policy"] = o.oov == OovPolicy::error ? "error" : "zero";
  j["hashtags"] = o.clean.hashtags == HashtagMode::drop_token ? "drop_token" : "strip_symbol";
  j["drop_mentions"] = o.clean.drop_mentions;
  j["resource_hash"] = hex64(f.resource_hash());
  j["dimension"] = f.dimension();
  if (f.vocab()) {
    const auto& v = *f.vocab();
    ordered_json ng;
    ng["max_n"] = v.max_n();
    ng["cap_per_order"] = o.ngram.cap_per_order;
    ng["per_tweet"] = v.options().per_tweet;
    ordered_json orders = ordered_json::array();
    for (int n = 1; n <= v.max_n(); ++n) {
      ordered_json entries = ordered_json::array();
      for (const auto& e : v.order(n)) entries.push_back(ordered_json::array({e.gram, e.count}));
      orders.push_back(std::move(entries));
    }
    ng["orders"] = std::move(orders);
    j["ngram"] = std::move(ng);
  }
  j["fingerprint"] = f.fingerprint();
  return j;
}

Featurizer decode_features(const json& j, const FeatureResources& res) {
  FeatureOptions o;
  const auto kind = feature_kind_from_string(require(j, "kind").get<std::string>());
  if (!kind) throw DataError("bundle: unknown feature kind");
  o.kind = *kind;
  o.oov = require(j, "oov_policy").get<std::string>() == "error" ? OovPolicy::error : OovPolicy::zero_vector;
  o.clean.hashtags = require(j, "hashtags").get<std::string>() == "drop_token" ? HashtagMode::drop_token
                                                                              : HashtagMode::strip_symbol;
  o.clean.drop_mentions = require(j, "drop_mentions").get<bool>();
  std::optional<NgramVocab> vocab;
  if (o.kind == FeatureKind::ngram) {
    const auto& ng = require(j, "ngram");
    o.ngram.max_n = require(ng, "max_n").get<int>();
    o.ngram.cap_per_order = require(ng, "cap_per_order").get<std::size_t>();
    o.ngram.per_tweet = require(ng, "per_tweet").get<bool>();
    std::vector<std::vector<NgramEntry>> orders;
    for (const auto& entries : require(ng, "orders")) {
      std::vector<NgramEntry> list;
      for (const auto& e : entries) list.push_back({e.at(0).get<std::string>(), e.at(1).get<std::uint64_t>()});
      orders.push_back(std::move(list));
    }
    vocab = NgramVocab(o.ngram, std::move(orders));
  }
  const auto hash_hex = require(j, "resource_hash").get<std::string>();
  const std::uint64_t hash = std::stoull(hash_hex, nullptr, 16);
  auto f = Featurizer::restore(o, res, std::move(vocab), hash);
  if (f.fingerprint() != require(j, "fingerprint").get<std::string>()) {
    throw DataError("bundle: feature fingerprint mismatch");
  }
  return f;
}

ordered_json encode_model(const TraitModel& model) {
  ordered_json j;
  if (const auto* r = std::get_if<RidgeModel<double>>(&model)) {
    j["kind"] = "ridge";
    j["lambda"] = encode_real(r->lambda);
    j["intercept"] = encode_real(r->intercept);
    j["weights"] = encode_vector(r->weights);
  } else {
    const auto& g = std::get<GpModel<double>>(model);
    j["kind"] = "gp";
    ordered_json p;
    p["log_signal_variance"] = encode_real(g.params.log_signal_variance);
    p["log_length_scale"] = encode_vector(g.params.log_length_scale);
    p["log_noise_variance"] = encode_real(g.params.log_noise_variance);
    j["params"] = std::move(p);
    j["jitter"] = encode_real(g.jitter);
    j["target_mean"] = encode_real(g.target_mean);
    j["target_std"] = encode_real(g.target_std);
    j["alpha"] = encode_vector(g.alpha);
    j["alpha_checksum"] = hex64(vector_checksum(g.alpha));
    j["inputs"] = encode_matrix(g.inputs);
  }
  return j;
}

TraitModel decode_model(const json& j, Eigen::Index dim) {
  const auto kind = require(j, "kind").get<std::string>();
  if (kind == "ridge") {
    RidgeModel<double> r;
    r.lambda = decode_real(require(j, "lambda"));
    r.intercept = decode_real(require(j, "intercept"));
    r.weights = decode_vector(require(j, "weights"));
    if (r.weights.size() != dim) throw DataError("bundle: ridge weights do not match feature dimension");
    return r;
  }
  if (kind != "gp") throw DataError("bundle: unknown model kind '" + kind + "'");
  const auto& pj = require(j, "params");
  KernelParams<double> p;
  p.log_signal_variance = decode_real(require(pj, "log_signal_variance"));
  p.log_length_scale = decode_vector(require(pj, "log_length_scale"));
  p.log_noise_variance = decode_real(require(pj, "log_noise_variance"));
  Eigen::VectorXd alpha = decode_vector(require(j, "alpha"));
  if (hex64(vector_checksum(alpha)) != require(j, "alpha_checksum").get<std::string>()) {
    throw DataError("bundle: GP alpha checksum mismatch");
  }
  return gp_restore<double>(p, decode_matrix(require(j, "inputs"), dim), decode_real(require(j, "target_mean")),
                            decode_real(require(j, "target_std")), std::move(alpha),
                            decode_real(require(j, "jitter")));
}

std::vector<std::size_t> default_validation_rows(std::size_t n, double val_fraction, std::uint64_t seed) {
  if (n < 2) return {};
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(derive_seed({seed, 0x7a1ULL}));
  for (std::size_t i = n - 1; i > 0; --i) std::swap(idx[i], idx[rng.below(i + 1)]);
  auto v = static_cast<std::size_t>(std::llround(val_fraction * static_cast<double>(n)));
  v = std::min(v, n - 1);
  std::vector<std::size_t> out(idx.end() - static_cast<std::ptrdiff_t>(v), idx.end());
  std::sort(out.begin(), out.end());
  return out;
}

Eigen::MatrixXd take_rows(const Eigen::MatrixXd& X, std::span<const std::size_t> rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), X.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = X.row(static_cast<Eigen::Index>(rows[i]));
  return out;
}

}  // namespace

std::string_view to_string(ModelKind kind) { return kind == ModelKind::gp ? "gp" : "ridge"; }

std::optional<ModelKind> model_kind_from_string(std::string_view s) {
  if (s == "gp") return ModelKind::gp;
  if (s == "ridge") return ModelKind::ridge;
  return std::nullopt;
}

Eigen::MatrixXd TraitModelBundle::predict_rows(const Eigen::Ref<const Eigen::MatrixXd>& raw) const {
  const Eigen::MatrixXd Z = standardizer.apply_rows(raw);
  Eigen::MatrixXd out(raw.rows(), static_cast<Eigen::Index>(kNumTraits));
  for (std::size_t t = 0; t < kNumTraits; ++t) {
    const auto col = static_cast<Eigen::Index>(t);
    if (const auto* r = std::get_if<RidgeModel<double>>(&models[t])) {
      out.col(col) = r->predict_rows(Z);
    } else {
      out.col(col) = gp_predict_mean(std::get<GpModel<double>>(models[t]), Z);
    }
  }
  if (clamp_predictions) out = out.cwiseMax(0.0).cwiseMin(1.0);
  return out;
}

TraitScores TraitModelBundle::predict(const Eigen::Ref<const Eigen::VectorXd>& raw) const {
  const Eigen::MatrixXd row = raw.transpose();
  const Eigen::MatrixXd p = predict_rows(row);
  TraitScores s;
  for (std::size_t t = 0; t < kNumTraits; ++t) s.values[t] = p(0, static_cast<Eigen::Index>(t));
  return s;
}

TraitScores TraitModelBundle::predict_tokens(const TokenStream& tokens) const {
  if (!featurizer) throw DataError("bundle has no feature pipeline attached");
  return predict(featurizer->transform(tokens).values);
}

std::string TraitModelBundle::describe_trait(Trait t) const {
  const auto& m = models[static_cast<std::size_t>(t)];
  if (const auto* r = std::get_if<RidgeModel<double>>(&m)) return "lambda=" + format_double(r->lambda);
  const auto& g = std::get<GpModel<double>>(m);
  std::string s = "signal_variance=" + format_double(g.params.signal_variance());
  if (g.params.is_ard()) {
    s += " length_scale=ard[" + std::to_string(g.params.log_length_scale.size()) + "]";
  } else {
    s += " length_scale=" + format_double(std::exp(g.params.log_length_scale[0]));
  }
  s += " noise_variance=" + format_double(g.params.noise_variance());
  return s;
}

TraitModelBundle train_big5(const Eigen::Ref<const Eigen::MatrixXd>& features, std::span<const TraitScores> traits,
                            ModelKind method, const TrainConfig& config,
                            std::span<const std::size_t> validation_rows) {
  const auto n = static_cast<std::size_t>(features.rows());
  if (traits.size() != n) {
    throw DataError("train_big5: " + std::to_string(n) + " feature rows but " + std::to_string(traits.size()) +
                    " trait records");
  }
  if (n < 2) throw DataError("train_big5 needs at least 2 users");

  TraitModelBundle bundle;
  bundle.method = method;
  bundle.clamp_predictions = config.clamp_predictions;
  bundle.standardizer = fit_standardizer(features);
  const Eigen::MatrixXd Z = bundle.standardizer.apply_rows(features);

  Eigen::MatrixXd Y(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(kNumTraits));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t t = 0; t < kNumTraits; ++t) Y(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t)) = traits[i].values[t];
  }

  if (method == ModelKind::ridge) {
    std::vector<std::size_t> val(validation_rows.begin(), validation_rows.end());
    if (val.empty()) val = default_validation_rows(n, config.val_fraction, config.seed);
    std::vector<bool> is_val(n, false);
    for (auto v : val) {
      if (v >= n) throw DataError("train_big5: validation row out of range");
      is_val[v] = true;
    }
    std::vector<std::size_t> fit_rows;
    for (std::size_t i = 0; i < n; ++i) {
      if (!is_val[i]) fit_rows.push_back(i);
    }
    const bool can_tune = !val.empty() && !fit_rows.empty() && config.lambda_grid.size() > 1;
    const Eigen::MatrixXd Xf = take_rows(Z, fit_rows);
    const Eigen::MatrixXd Xv = take_rows(Z, val);
    const Eigen::MatrixXd Yf = take_rows(Y, fit_rows);
    const Eigen::MatrixXd Yv = take_rows(Y, val);
    for (std::size_t t = 0; t < kNumTraits; ++t) {
      const auto col = static_cast<Eigen::Index>(t);
      double lambda;
      if (can_tune) {
        lambda = ridge_tune(Xf, Yf.col(col), Xv, Yv.col(col), std::span<const double>(config.lambda_grid));
      } else {
        if (config.lambda_grid.empty()) throw DataError("train_big5: empty lambda grid");
        std::vector<double> g = config.lambda_grid;
        std::sort(g.begin(), g.end());
        lambda = g[g.size() / 2];
      }
      bundle.models[t] = ridge_fit(Z, Y.col(col), lambda);
    }
  } else {
    for (std::size_t t = 0; t < kNumTraits; ++t) {
      const auto col = static_cast<Eigen::Index>(t);
      OptimizeOptions opt = config.gp;
      opt.seed = derive_seed({config.seed, t, 0x69ULL});
      const Eigen::VectorXd y = Y.col(col);
      const auto params = gp_optimize_hyperparams(Z, y, opt);
      bundle.models[t] = gp_fit(Z, y, params, config.gp.gp);
    }
  }
  return bundle;
}

std::string format_bundle(const TraitModelBundle& bundle) {
  ordered_json j;
  j["version"] = TraitModelBundle::kVersion;
  j["method"] = std::string(to_string(bundle.method));
  j["clamp_predictions"] = bundle.clamp_predictions;
  j["feature_config"] = bundle.featurizer ? encode_features(*bundle.featurizer) : ordered_json(nullptr);
  ordered_json st;
  st["mean"] = encode_vector(bundle.standardizer.mean);
  st["scale"] = encode_vector(bundle.standardizer.scale);
  ordered_json constant = ordered_json::array();
  for (Eigen::Index i = 0; i < bundle.standardizer.constant.size(); ++i) constant.push_back(bool(bundle.standardizer.constant[i]));
  st["constant"] = std::move(constant);
  j["standardizer"] = std::move(st);
  ordered_json traits;
  for (Trait t : kTraits) traits[std::string(trait_key(t))] = encode_model(bundle.models[static_cast<std::size_t>(t)]);
  j["traits"] = std::move(traits);
  return j.dump() + "\n";
}

void save_bundle(const std::filesystem::path& path, const TraitModelBundle& bundle) {
  write_file_atomic(path, format_bundle(bundle));
}

FeatureKind peek_bundle_feature_kind(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("bundle: malformed JSON (") + e.what() + ")");
  }
  const auto& fc = require(j, "feature_config");
  if (fc.is_null()) throw DataError("bundle has no feature configuration");
  auto k = feature_kind_from_string(require(fc, "kind").get<std::string>());
  if (!k) throw DataError("bundle: unknown feature kind");
  return *k;
}

TraitModelBundle parse_bundle(std::string_view text, const FeatureResources& res) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("bundle: malformed JSON (") + e.what() + ")");
  }
  try {
    if (require(j, "version").get<int>() != TraitModelBundle::kVersion) throw DataError("bundle: unsupported version");
    TraitModelBundle b;
    const auto method = model_kind_from_string(require(j, "method").get<std::string>());
    if (!method) throw DataError("bundle: unknown method");
    b.method = *method;
    b.clamp_predictions = require(j, "clamp_predictions").get<bool>();
    const auto& fc = require(j, "feature_config");
    if (!fc.is_null()) b.featurizer = decode_features(fc, res);

    const auto& st = require(j, "standardizer");
    b.standardizer.mean = decode_vector(require(st, "mean"));
    b.standardizer.scale = decode_vector(require(st, "scale"));
    const auto& constant = require(st, "constant");
    b.standardizer.constant.resize(static_cast<Eigen::Index>(constant.size()));
    for (std::size_t i = 0; i < constant.size(); ++i) b.standardizer.constant[static_cast<Eigen::Index>(i)] = constant[i].get<bool>();
    const Eigen::Index dim = b.standardizer.mean.size();
    if (b.standardizer.scale.size() != dim || b.standardizer.constant.size() != dim) {
      throw DataError("bundle: standardizer fields disagree in length");
    }
    if (b.featurizer && b.featurizer->dimension() != dim) {
      throw DataError("bundle: feature dimension does not match the standardizer");
    }

    const auto& traits = require(j, "traits");
    if (traits.size() != kNumTraits) throw DataError("bundle: expected exactly five trait models");
    for (Trait t : kTraits) {
      b.models[static_cast<std::size_t>(t)] = decode_model(require(traits, std::string(trait_key(t)).c_str()), dim);
    }
    return b;
  } catch (const json::exception& e) {
    throw DataError(std::string("bundle: ") + e.what());
  }
}

TraitModelBundle load_bundle(const std::filesystem::path& path, const FeatureResources& res) {
  return parse_bundle(read_file(path), res);
}

}  // namespace persona
