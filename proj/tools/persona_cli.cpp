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

// persona: train, apply and evaluate Big-5 trait regressors on tweet corpora.

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "persona/bundle.hpp"
#include "persona/corpus.hpp"
#include "persona/coverage.hpp"
#include "persona/embedding.hpp"
#include "persona/error.hpp"
#include "persona/eval.hpp"
#include "persona/featurizer.hpp"
#include "persona/io.hpp"
#include "persona/lexicon.hpp"
#include "persona/preprocess.hpp"
#include "persona/report.hpp"
#include "persona/rng.hpp"
#include "persona/svg.hpp"

namespace fs = std::filesystem;
using namespace persona;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void log(const std::string& msg) { std::cerr << "persona: " << msg << "\n"; }

struct RunConfig {
  std::string corpus;
  std::string test_corpus;
  std::string embeddings;
  std::string lexicon;
  std::string bundle;
  std::string out;
  std::string features = "embedding";
  std::string model = "gp";
  std::string methods;
  std::string setting;
  std::uint64_t seed = 0;
  std::size_t folds = 10;
  double val_fraction = 0.25;
  std::size_t subsets = 20;
  std::string tweet_counts = "10,25,50,75,100,150,200";
  std::string aggregation = "per-replicate";
  std::string oov = "error";
  std::string hashtags = "drop";
  bool drop_mentions = false;
  bool drop_retweets = false;
  std::size_t min_tweets = 0;
  std::vector<double> raw_scale;
  int ngram_max_n = 3;
  std::size_t ngram_cap = 2000;
  bool ngram_per_tweet = false;
  std::size_t restarts = 3;
  bool ard = false;
  bool clamp = false;

  // synth
  std::size_t users = 300;
  std::size_t tweets = 200;
  double tweet_count_std = 0.0;
  double noise = 0.15;
  std::size_t vocab = 2000;
  long dim = 50;
  std::size_t topics = 8;
  std::size_t categories = 8;
  std::string id_prefix = "user";
  std::optional<std::uint64_t> link_seed;
};

CleanOptions clean_options(const RunConfig& c) {
  CleanOptions o;
  if (c.hashtags == "drop") {
    o.hashtags = HashtagMode::drop_token;
  } else if (c.hashtags == "strip") {
    o.hashtags = HashtagMode::strip_symbol;
  } else {
    throw UsageError("--hashtags must be drop or strip");
  }
  o.drop_mentions = c.drop_mentions;
  return o;
}

LoadOptions load_options(const RunConfig& c, bool require_traits = true) {
  LoadOptions o;
  o.min_tweets = c.min_tweets;
  o.drop_retweets = c.drop_retweets;
  o.require_traits = require_traits;
  if (!c.raw_scale.empty()) {
    if (c.raw_scale.size() != 2) throw UsageError("--raw-scale takes MIN,MAX");
    o.raw_scale = RawScale{c.raw_scale[0], c.raw_scale[1]};
  }
  return o;
}

void require_file(const std::string& path, const char* flag) {
  if (path.empty()) throw UsageError(std::string(flag) + " is required");
  if (!fs::is_regular_file(path)) throw UsageError(std::string(flag) + ": no such file '" + path + "'");
}

fs::path out_dir(const RunConfig& c) {
  if (c.out.empty()) throw UsageError("--out is required");
  fs::create_directories(c.out);
  return c.out;
}

Corpus read_corpus(const std::string& path, const char* flag, const RunConfig& c, bool require_traits = true) {
  require_file(path, flag);
  LoadSummary sum;
  auto corpus = load_corpus(path, load_options(c, require_traits), &sum);
  log("read " + std::to_string(sum.users_read) + " users from " + path + ", kept " + std::to_string(sum.users_kept));
  return corpus;
}

/// Loads the resources the given feature kinds need.
FeatureResources load_resources(const RunConfig& c, const std::vector<FeatureKind>& kinds) {
  FeatureResources res;
  for (auto k : kinds) {
    if (k == FeatureKind::embedding && !res.embeddings) {
      require_file(c.embeddings, "--embeddings");
      res.embeddings = std::make_shared<EmbeddingTable>(load_embeddings(c.embeddings));
    }
    if (k == FeatureKind::lexicon && !res.lexicon) {
      require_file(c.lexicon, "--lexicon");
      res.lexicon = std::make_shared<Lexicon>(load_lexicon(c.lexicon));
    }
  }
  return res;
}

FeatureKind parse_feature(const std::string& s) {
  auto k = feature_kind_from_string(s);
  if (!k) throw UsageError("unknown feature kind '" + s + "'");
  return *k;
}

ModelKind parse_model(const std::string& s) {
  auto m = model_kind_from_string(s);
  if (!m) throw UsageError("unknown model '" + s + "'");
  return *m;
}

OovPolicy parse_oov(const std::string& s) {
  if (s == "error") return OovPolicy::error;
  if (s == "zero") return OovPolicy::zero_vector;
  throw UsageError("--oov must be error or zero");
}

std::vector<std::size_t> parse_counts(const std::string& s) {
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos) {
      throw UsageError("--tweet-counts must be a comma-separated list of positive integers");
    }
    out.push_back(std::stoul(item));
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i] == 0 || (i > 0 && out[i] <= out[i - 1])) {
      throw UsageError("--tweet-counts must be strictly increasing positive integers");
    }
  }
  if (out.empty()) throw UsageError("--tweet-counts is empty");
  return out;
}

EvalConfig eval_config(const RunConfig& c) {
  EvalConfig e;
  e.folds = c.folds;
  e.val_fraction = c.val_fraction;
  e.seed = c.seed;
  e.oov = parse_oov(c.oov);
  e.ngram.max_n = c.ngram_max_n;
  e.ngram.cap_per_order = c.ngram_cap;
  e.ngram.per_tweet = c.ngram_per_tweet;
  e.clean = clean_options(c);
  e.train.val_fraction = c.val_fraction;
  e.train.seed = c.seed;
  e.train.gp.restarts = c.restarts;
  e.train.gp.ard = c.ard;
  e.train.clamp_predictions = c.clamp;
  return e;
}

std::vector<MethodSpec> eval_methods(const RunConfig& c, const std::string& setting) {
  if (c.methods.empty()) {
    if (setting == "reallife") {
      return {{FeatureKind::lexicon, ModelKind::ridge},
              {FeatureKind::ngram, ModelKind::ridge},
              {FeatureKind::embedding, ModelKind::gp}};
    }
    return comparison_methods();
  }
  std::vector<MethodSpec> out;
  std::stringstream ss(c.methods);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto m = method_from_label(item);
    if (!m) throw UsageError("unknown method '" + item + "' (expected feature+model, e.g. embedding+gp)");
    out.push_back(*m);
  }
  return out;
}

// ---- subcommands ----

int cmd_clean(const RunConfig& c) {
  const auto opts = clean_options(c);
  std::string line;
  std::string out;
  while (std::getline(std::cin, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out += clean_tweet(line, opts);
    out += '\n';
  }
  std::cout << out;
  return 0;
}

int cmd_synth(const RunConfig& c) {
  const auto dir = out_dir(c);
  EmbeddingTable table;
  const bool own_table = c.embeddings.empty();
  if (own_table) {
    if (c.dim < 1) throw UsageError("--dim must be positive");
    table = make_synthetic_embeddings(c.vocab, c.dim, c.topics, derive_seed({c.link_seed.value_or(c.seed), 0xe3bULL}));
  } else {
    require_file(c.embeddings, "--embeddings");
    table = load_embeddings(c.embeddings);
  }
  SynthOptions so;
  so.n_users = c.users;
  so.tweets_per_user = c.tweets;
  so.tweet_count_std = c.tweet_count_std;
  so.noise_std = c.noise;
  so.seed = c.seed;
  so.link_seed = c.link_seed;
  so.id_prefix = c.id_prefix;
  so.n_topics = c.topics;
  const auto corpus = generate_synthetic(so, table);
  save_corpus(dir / "corpus.jsonl", corpus);
  if (own_table) {
    save_embeddings(dir / "embeddings.txt", table);
    const auto lex = make_synthetic_lexicon(table.words(), c.categories, 0.5,
                                            derive_seed({c.link_seed.value_or(c.seed), 0x1e7ULL}));
    write_file_atomic(dir / "lexicon.tsv", format_lexicon(lex));
  }
  log("wrote " + std::to_string(corpus.size()) + " synthetic users to " + dir.string());
  return 0;
}

int cmd_train(const RunConfig& c) {
  const auto kind = parse_feature(c.features);
  const auto model = parse_model(c.model);
  const auto res = load_resources(c, {kind});
  const auto corpus = read_corpus(c.corpus, "--corpus", c);
  const auto dir = out_dir(c);
  const auto ec = eval_config(c);
  const auto users = tokenize_corpus(corpus, ec.clean);
  if (users.size() < 2) throw DataError("training needs at least 2 users");

  // Ridge tunes lambda on a seeded validation share and refits on everyone;
  // GP uses all users either way.
  std::vector<std::size_t> order(users.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(derive_seed({c.seed, 0x7a1ULL}));
  for (std::size_t i = order.size() - 1; i > 0; --i) std::swap(order[i], order[rng.below(i + 1)]);
  auto v = static_cast<std::size_t>(std::llround(c.val_fraction * static_cast<double>(order.size())));
  v = std::min(v, order.size() - 1);
  std::vector<std::size_t> validation(order.end() - static_cast<std::ptrdiff_t>(v), order.end());
  std::vector<std::size_t> train(order.begin(), order.end() - static_cast<std::ptrdiff_t>(v));
  std::sort(train.begin(), train.end());
  std::sort(validation.begin(), validation.end());
  const auto bundle = train_method({kind, model}, users, corpus, train, validation, res, ec, c.seed);
  save_bundle(dir / "bundle.json", bundle);

  std::vector<TokenStream> streams;
  for (const auto& u : users) streams.push_back(u.all);
  std::string summary = "users: " + std::to_string(corpus.size()) + "\nmethod: " + c.features + "+" + c.model +
                        "\nfeature dimension: " + std::to_string(bundle.featurizer->dimension()) +
                        "\nfingerprint: " + bundle.feature_fingerprint() + "\n";
  try {
    CoverageReport cov;
    switch (kind) {
      case FeatureKind::embedding: cov = coverage_report(streams, *res.embeddings); break;
      case FeatureKind::lexicon: cov = coverage_report(streams, *res.lexicon); break;
      case FeatureKind::ngram: cov = coverage_report(streams, *bundle.featurizer->vocab()); break;
    }
    for (const auto& e : cov.entries) {
      summary += "coverage " + e.label + ": " + format_double(e.fraction) + " (" + std::to_string(e.covered) + "/" +
                 std::to_string(e.total) + ")\n";
    }
  } catch (const DataError& e) {
    summary += std::string("coverage: undefined (") + e.what() + ")\n";
  }
  for (Trait t : kTraits) summary += std::string(trait_key(t)) + ": " + bundle.describe_trait(t) + "\n";
  write_file_atomic(dir / "train_summary.txt", summary);
  log("wrote " + (dir / "bundle.json").string());
  return 0;
}

int cmd_predict(const RunConfig& c) {
  require_file(c.bundle, "--bundle");
  const auto text = read_file(c.bundle);
  const auto kind = peek_bundle_feature_kind(text);
  const auto res = load_resources(c, {kind});
  const auto bundle = parse_bundle(text, res);
  const auto corpus = read_corpus(c.corpus, "--corpus", c, false);
  const auto dir = out_dir(c);
  const auto users = tokenize_corpus(corpus, bundle.featurizer->options().clean);

  std::vector<std::string> ids;
  std::vector<Eigen::VectorXd> rows;
  std::string errors = "user_id,error\n";
  std::size_t n_errors = 0;
  for (std::size_t i = 0; i < users.size(); ++i) {
    try {
      const auto s = bundle.predict_tokens(users[i].all);
      ids.push_back(corpus[i].user_id);
      rows.push_back(Eigen::Map<const Eigen::VectorXd>(s.values.data(), static_cast<Eigen::Index>(kNumTraits)));
    } catch (const NoCoveredTokensError& e) {
      errors += corpus[i].user_id + "," + e.what() + "\n";
      ++n_errors;
    }
  }
  Eigen::MatrixXd P(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(kNumTraits));
  for (std::size_t i = 0; i < rows.size(); ++i) P.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  write_file_atomic(dir / "predictions.csv", format_predictions(ids, P));
  write_file_atomic(dir / "prediction_errors.csv", errors);
  log("predicted " + std::to_string(ids.size()) + " users, " + std::to_string(n_errors) + " errors");
  return 0;
}

int cmd_coverage(const RunConfig& c) {
  const auto corpus = read_corpus(c.corpus, "--corpus", c);
  const auto dir = out_dir(c);
  const auto clean = clean_options(c);
  const auto users = tokenize_corpus(corpus, clean);
  std::vector<TokenStream> streams;
  for (const auto& u : users) streams.push_back(u.all);

  std::vector<FeatureKind> kinds;
  if (!c.embeddings.empty()) kinds.push_back(FeatureKind::embedding);
  if (!c.lexicon.empty()) kinds.push_back(FeatureKind::lexicon);
  kinds.push_back(FeatureKind::ngram);
  const auto res = load_resources(c, kinds);
  EvalReport rep;
  rep.n_users = corpus.size();
  if (res.embeddings) rep.coverage.push_back(coverage_report(streams, *res.embeddings));
  if (res.lexicon) rep.coverage.push_back(coverage_report(streams, *res.lexicon));
  NgramOptions no;
  no.max_n = c.ngram_max_n;
  no.cap_per_order = c.ngram_cap;
  no.per_tweet = c.ngram_per_tweet;
  rep.coverage.push_back(coverage_report(streams, build_ngram_vocab(streams, no)));
  auto rows = to_rows(rep);
  for (auto& r : rows) r.setting = "coverage";
  write_file_atomic(dir / "coverage.csv", format_csv(rows));
  std::cout << summarize(rep);
  return 0;
}

int cmd_eval(const RunConfig& c) {
  const auto& setting = c.setting;
  const auto methods = eval_methods(c, setting);
  std::vector<FeatureKind> kinds;
  for (const auto& m : methods) kinds.push_back(m.feature);
  const auto res = load_resources(c, kinds);
  const auto ec = eval_config(c);

  if (setting == "full") {
    const auto corpus = read_corpus(c.corpus, "--corpus", c);
    const auto dir = out_dir(c);
    const auto report = run_full_setting(corpus, methods, res, ec);
    write_file_atomic(dir / "full.csv", format_csv(to_rows(report)));
    write_file_atomic(dir / "full_summary.txt", summarize(report));
    std::cout << summarize(report);
  } else if (setting == "sampling") {
    SamplingConfig sc;
    sc.tweet_counts = parse_counts(c.tweet_counts);
    sc.n_subsets = c.subsets;
    if (c.aggregation == "per-replicate") {
      sc.aggregation = SamplingAggregation::per_replicate;
    } else if (c.aggregation == "average-predictions") {
      sc.aggregation = SamplingAggregation::average_predictions;
    } else {
      throw UsageError("--aggregation must be per-replicate or average-predictions");
    }
    const auto corpus = read_corpus(c.corpus, "--corpus", c);
    const auto dir = out_dir(c);
    const auto report = run_sampling_setting(corpus, methods, res, ec, sc);
    write_file_atomic(dir / "sampling.csv", format_csv(to_rows(report)));
    write_file_atomic(dir / "sampling.svg", sampling_chart_svg(report));
    write_file_atomic(dir / "sampling_summary.txt", summarize(report));
    std::cout << summarize(report);
  } else if (setting == "reallife") {
    const auto train = read_corpus(c.corpus, "--corpus", c);
    const auto test = read_corpus(c.test_corpus, "--test-corpus", c);
    const auto dir = out_dir(c);
    const auto report = run_reallife_setting(train, test, methods, res, ec);
    write_file_atomic(dir / "reallife.csv", format_csv(to_rows(report)));
    write_file_atomic(dir / "reallife_summary.txt", summarize(report));
    std::cout << summarize(report);
  } else {
    throw UsageError("--setting must be full, sampling or reallife");
  }
  return 0;
}

/// Flat `key=value` file; keys are long flag names without the dashes.
std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
  require_file(path, "--config");
  std::vector<std::pair<std::string, std::string>> out;
  const auto text = read_file(path);
  std::size_t line_no = 0;
  for (auto line : split_lines(text)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw UsageError(path + ":" + std::to_string(line_no) + ": expected key=value");
    }
    auto trim = [](std::string_view s) {
      const auto b = s.find_first_not_of(" \t");
      if (b == std::string_view::npos) return std::string();
      const auto e = s.find_last_not_of(" \t");
      return std::string(s.substr(b, e - b + 1));
    };
    out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return out;
}

/// Values from the config file fill options the command line left unset.
void apply_config(CLI::App* sub, const std::string& path) {
  for (const auto& [key, value] : read_config(path)) {
    CLI::Option* opt = sub->get_option_no_throw("--" + key);
    if (opt == nullptr || key == "config") {
      throw UsageError(path + ": unknown key '" + key + "' for '" + sub->get_name() + "'");
    }
    if (opt->count() > 0) continue;
    opt->add_result(value);
    opt->run_callback();
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Big-5 personality prediction from tweets"};
  app.require_subcommand(1);
  RunConfig c;
  std::string config_path;

  auto add_common = [&](CLI::App* s) {
    s->add_option("--config", config_path, "key=value file; command-line flags win");
    s->add_option("--seed", c.seed, "random seed");
    s->add_option("--out", c.out, "output directory");
  };
  auto add_clean = [&](CLI::App* s) {
    s->add_option("--hashtags", c.hashtags, "drop (whole token) or strip (keep the word)");
    s->add_flag("--drop-mentions", c.drop_mentions, "delete @-mention tokens");
  };
  auto add_load = [&](CLI::App* s) {
    s->add_option("--min-tweets", c.min_tweets, "drop users with fewer tweets");
    s->add_option("--raw-scale", c.raw_scale, "raw trait range MIN,MAX to normalize from")->delimiter(',');
    s->add_flag("--drop-retweets", c.drop_retweets, "ignore tweets starting with 'RT '");
  };
  auto add_features = [&](CLI::App* s) {
    s->add_option("--embeddings", c.embeddings, "word vector file");
    s->add_option("--lexicon", c.lexicon, "category<TAB>pattern file");
    s->add_option("--oov", c.oov, "error or zero: users with no known token");
    s->add_option("--ngram-max-n", c.ngram_max_n, "largest n-gram order (1-3)");
    s->add_option("--ngram-cap", c.ngram_cap, "vocabulary size per order");
    s->add_flag("--ngram-per-tweet", c.ngram_per_tweet, "n-grams do not cross tweet boundaries");
  };
  auto add_training = [&](CLI::App* s) {
    s->add_option("--val-fraction", c.val_fraction, "validation share of the training side");
    s->add_option("--restarts", c.restarts, "GP optimizer restarts");
    s->add_flag("--ard", c.ard, "one GP length scale per feature");
    s->add_flag("--clamp", c.clamp, "clamp predictions to [0,1]");
  };

  auto* clean = app.add_subcommand("clean", "clean tweets from stdin, one per line");
  add_clean(clean);
  clean->add_option("--config", config_path, "key=value file; command-line flags win");

  auto* synth = app.add_subcommand("synth", "write a synthetic corpus, embeddings and lexicon");
  add_common(synth);
  synth->add_option("--users", c.users, "number of users");
  synth->add_option("--tweets", c.tweets, "mean tweets per user");
  synth->add_option("--tweet-count-std", c.tweet_count_std, "std of tweets per user");
  synth->add_option("--noise", c.noise, "trait noise std");
  synth->add_option("--vocab", c.vocab, "vocabulary size");
  synth->add_option("--dim", c.dim, "embedding dimension");
  synth->add_option("--topics", c.topics, "topic clusters");
  synth->add_option("--categories", c.categories, "lexicon categories");
  synth->add_option("--id-prefix", c.id_prefix, "user id prefix");
  synth->add_option("--link-seed", c.link_seed, "seed of the text-to-trait link, shared across corpora");
  synth->add_option("--embeddings", c.embeddings, "reuse this table instead of generating one");

  auto* train = app.add_subcommand("train", "train five trait models");
  add_common(train);
  add_clean(train);
  add_load(train);
  add_features(train);
  add_training(train);
  train->add_option("--corpus", c.corpus, "JSONL corpus");
  train->add_option("--features", c.features, "embedding, lexicon or ngram");
  train->add_option("--model", c.model, "gp or ridge");

  auto* predict = app.add_subcommand("predict", "predict traits with a trained bundle");
  predict->add_option("--config", config_path, "key=value file; command-line flags win");
  predict->add_option("--out", c.out, "output directory");
  predict->add_option("--bundle", c.bundle, "bundle.json from train");
  predict->add_option("--corpus", c.corpus, "JSONL corpus (traits optional)");
  predict->add_option("--embeddings", c.embeddings, "word vector file");
  predict->add_option("--lexicon", c.lexicon, "category<TAB>pattern file");
  add_load(predict);

  auto* coverage = app.add_subcommand("coverage", "vocabulary coverage of a corpus");
  add_common(coverage);
  add_clean(coverage);
  add_load(coverage);
  add_features(coverage);
  coverage->add_option("--corpus", c.corpus, "JSONL corpus");

  auto* eval = app.add_subcommand("eval", "run an evaluation setting");
  add_common(eval);
  add_clean(eval);
  add_load(eval);
  add_features(eval);
  add_training(eval);
  eval->add_option("--setting", c.setting, "full, sampling or reallife")->required();
  eval->add_option("--corpus", c.corpus, "JSONL corpus (training corpus for reallife)");
  eval->add_option("--test-corpus", c.test_corpus, "held-out JSONL corpus for reallife");
  eval->add_option("--methods", c.methods, "comma list such as embedding+gp,ngram+ridge");
  eval->add_option("--folds", c.folds, "cross-validation folds");
  eval->add_option("--subsets", c.subsets, "random subsets per tweet count");
  eval->add_option("--tweet-counts", c.tweet_counts, "comma list of tweet counts");
  eval->add_option("--aggregation", c.aggregation, "per-replicate or average-predictions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    if (!config_path.empty()) apply_config(sub, config_path);
    const std::string name = sub->get_name();
    if (name == "clean") return cmd_clean(c);
    if (name == "synth") return cmd_synth(c);
    if (name == "train") return cmd_train(c);
    if (name == "predict") return cmd_predict(c);
    if (name == "coverage") return cmd_coverage(c);
    return cmd_eval(c);
  } catch (const UsageError& e) {
    std::cerr << "persona: " << e.what() << "\n" << sub->help();
    return 1;
  } catch (const CLI::ParseError& e) {
    std::cerr << "persona: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "persona: numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "persona: " << e.what() << "\n";
    return 2;
  }
}
