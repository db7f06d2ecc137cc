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

#include "persona/corpus.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <json.hpp>
#include <unordered_set>

#include "persona/embedding.hpp"
#include "persona/error.hpp"
#include "persona/io.hpp"
#include "persona/preprocess.hpp"
#include "persona/rng.hpp"

namespace persona {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string at_line(std::string_view source, std::size_t line_no) {
  return std::string(source) + ":" + std::to_string(line_no) + ": ";
}

TraitScores parse_traits(const nlohmann::json& obj, const LoadOptions& opts,
                         const std::string& ctx) {
  if (!obj.is_object()) throw DataError(ctx + "'traits' must be an object");
  if (obj.size() != kNumTraits) {
    throw DataError(ctx + "'traits' must have exactly the keys o,c,e,a,n");
  }
  TraitScores scores;
  for (Trait t : kTraits) {
    const auto key = std::string(trait_key(t));
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_number()) {
      throw DataError(ctx + "missing or non-numeric trait '" + key + "'");
    }
    const double raw = it->get<double>();
    if (!std::isfinite(raw)) throw DataError(ctx + "trait '" + key + "' is not finite");
    if (opts.raw_scale) {
      if (raw < opts.raw_scale->min || raw > opts.raw_scale->max) {
        throw DataError(ctx + "trait '" + key + "' = " + format_double(raw) +
                        " outside raw range [" + format_double(opts.raw_scale->min) +
                        ", " + format_double(opts.raw_scale->max) + "]");
      }
      scores[t] = normalize_score(raw, opts.raw_scale->min, opts.raw_scale->max);
    } else {
      if (raw < 0.0 || raw > 1.0) {
        throw DataError(ctx + "trait '" + key + "' = " + format_double(raw) +
                        " outside [0,1]; pass a raw scale to normalize");
      }
      scores[t] = raw;
    }
  }
  return scores;
}

}  // namespace

double normalize_score(double raw, double raw_min, double raw_max) {
  if (!(raw_min < raw_max)) throw DataError("raw scale needs min < max");
  if (!(raw >= raw_min && raw <= raw_max)) {
    throw DataError("score " + format_double(raw) + " outside raw range");
  }
  return (raw - raw_min) / (raw_max - raw_min);
}

Corpus parse_corpus(std::string_view text, const LoadOptions& opts, LoadSummary* summary,
                    std::string_view source) {
  LoadSummary sum;
  Corpus out;
  std::unordered_set<std::string> seen;
  const auto lines = split_lines(text);
  const std::size_t threshold = std::max<std::size_t>(opts.min_tweets, 1);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto line = lines[i];
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    const auto ctx = at_line(source, i + 1);
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw DataError(ctx + "malformed JSON (" + e.what() + ")");
    }
    if (!obj.is_object()) throw DataError(ctx + "expected a JSON object");

    UserRecord rec;
    auto id = obj.find("user_id");
    if (id == obj.end() || !id->is_string() || id->get<std::string>().empty()) {
      throw DataError(ctx + "missing or empty 'user_id'");
    }
    rec.user_id = id->get<std::string>();
    if (!seen.insert(rec.user_id).second) {
      throw DataError(ctx + "duplicate user_id '" + rec.user_id + "'");
    }
    auto tr = obj.find("traits");
    if (tr != obj.end()) {
      rec.traits = parse_traits(*tr, opts, ctx);
    } else if (opts.require_traits) {
      throw DataError(ctx + "missing 'traits'");
    } else {
      rec.traits.values.fill(std::numeric_limits<double>::quiet_NaN());
    }

    auto tw = obj.find("tweets");
    if (tw == obj.end() || !tw->is_array()) throw DataError(ctx + "missing 'tweets' array");
    rec.tweets.reserve(tw->size());
    for (const auto& t : *tw) {
      if (!t.is_string()) throw DataError(ctx + "tweets must be strings");
      auto s = t.get<std::string>();
      if (opts.drop_retweets && s.starts_with("RT ")) {
        ++sum.retweets_dropped;
        continue;
      }
      rec.tweets.push_back(std::move(s));
    }

    ++sum.users_read;
    if (rec.tweets.size() < threshold) {
      ++sum.users_dropped;
      continue;
    }
    out.push_back(std::move(rec));
  }
  sum.users_kept = out.size();
  if (summary) *summary = sum;
  return out;
}

Corpus load_corpus(const std::filesystem::path& path, const LoadOptions& opts,
                   LoadSummary* summary) {
  return parse_corpus(read_file(path), opts, summary, path.string());
}

std::string format_corpus(const Corpus& corpus) {
  std::string out;
  for (const auto& rec : corpus) {
    ordered_json obj;
    obj["user_id"] = rec.user_id;
    ordered_json traits = ordered_json::object();
    for (Trait t : kTraits) traits[std::string(trait_key(t))] = rec.traits[t];
    obj["traits"] = std::move(traits);
    obj["tweets"] = rec.tweets;
    out += obj.dump();
    out.push_back('\n');
  }
  return out;
}

void save_corpus(const std::filesystem::path& path, const Corpus& corpus) {
  write_file_atomic(path, format_corpus(corpus));
}

CorpusStats corpus_stats(const Corpus& records) {
  if (records.empty()) throw DataError("corpus_stats needs at least one record");
  CorpusStats s;
  s.user_count = records.size();
  const double n = static_cast<double>(records.size());
  for (Trait t : kTraits) {
    const auto k = static_cast<std::size_t>(t);
    double mean = 0.0;
    for (const auto& r : records) mean += r.traits[t];
    mean /= n;
    double ss = 0.0;
    for (const auto& r : records) ss += (r.traits[t] - mean) * (r.traits[t] - mean);
    s.trait_mean[k] = mean;
    s.trait_std[k] = std::sqrt(ss / n);
  }
  double mean = 0.0;
  for (const auto& r : records) mean += static_cast<double>(r.tweets.size());
  mean /= n;
  double ss = 0.0;
  for (const auto& r : records) {
    const double d = static_cast<double>(r.tweets.size()) - mean;
    ss += d * d;
  }
  s.tweet_count_mean = mean;
  s.tweet_count_std = std::sqrt(ss / n);
  return s;
}

Corpus generate_synthetic(const SynthOptions& opts, const EmbeddingTable& table) {
  if (table.empty()) throw DataError("synthetic corpus needs a nonempty embedding table");
  if (opts.n_users == 0) throw DataError("synthetic corpus needs at least one user");
  if (opts.n_topics == 0 || opts.min_tokens_per_tweet == 0 ||
      opts.min_tokens_per_tweet > opts.max_tokens_per_tweet) {
    throw DataError("invalid synthetic tweet shape");
  }
  const Eigen::Index dim = table.dimension();
  const std::size_t n_topics = opts.n_topics;

  // Only words that survive cleaning unchanged are usable, otherwise the
  // trait link would not match what the feature pipeline sees.
  std::vector<std::vector<std::size_t>> topic_words(n_topics);
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto& w = table.word(i);
    if (clean_tweet(w) == w) topic_words[i % n_topics].push_back(i);
  }
  std::erase_if(topic_words, [](const auto& v) { return v.empty(); });
  if (topic_words.empty()) throw DataError("no embedding word survives tweet cleaning");
  const auto n_active = static_cast<Eigen::Index>(topic_words.size());

  // Trait link: projection of the mean vector, calibrated on the expected
  // mean vectors implied by random topic mixtures.
  const std::uint64_t link = opts.link_seed.value_or(opts.seed);
  Rng link_rng(derive_seed({link, 0x11c0ULL}));
  Eigen::MatrixXd projection(static_cast<Eigen::Index>(kNumTraits), dim);
  for (Eigen::Index r = 0; r < projection.rows(); ++r) {
    for (Eigen::Index d = 0; d < dim; ++d) projection(r, d) = link_rng.normal();
  }
  Eigen::MatrixXd topic_means = Eigen::MatrixXd::Zero(dim, n_active);
  for (Eigen::Index k = 0; k < n_active; ++k) {
    for (auto w : topic_words[static_cast<std::size_t>(k)]) topic_means.col(k) += table.vector(w);
    topic_means.col(k) /= static_cast<double>(topic_words[static_cast<std::size_t>(k)].size());
  }
  const Eigen::MatrixXd topic_scores = projection * topic_means;  // 5 x T

  constexpr double kSharpness = 1.5;
  auto draw_mixture = [&](Rng& rng) {
    Eigen::VectorXd g(n_active);
    for (Eigen::Index k = 0; k < n_active; ++k) g[k] = kSharpness * rng.normal();
    Eigen::VectorXd w = (g.array() - g.maxCoeff()).exp();
    return Eigen::VectorXd(w / w.sum());
  };

  constexpr int kCalibrationDraws = 4096;
  Eigen::MatrixXd cal(static_cast<Eigen::Index>(kNumTraits), kCalibrationDraws);
  for (int j = 0; j < kCalibrationDraws; ++j) cal.col(j) = topic_scores * draw_mixture(link_rng);
  const Eigen::VectorXd cal_mean = cal.rowwise().mean();
  const Eigen::VectorXd cal_std =
      ((cal.colwise() - cal_mean).array().square().rowwise().sum() / kCalibrationDraws).sqrt();

  static constexpr std::string_view kLetters = "abcdefghijklmnopqrstuvwxyz";
  static constexpr std::string_view kAlnum = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";
  auto random_string = [](Rng& rng, std::string_view alphabet, std::size_t len) {
    std::string s;
    for (std::size_t i = 0; i < len; ++i) s.push_back(alphabet[rng.below(alphabet.size())]);
    return s;
  };

  Corpus corpus;
  corpus.reserve(opts.n_users);
  const std::size_t width = std::to_string(opts.n_users - 1).size();
  for (std::size_t u = 0; u < opts.n_users; ++u) {
    Rng rng(derive_seed({opts.seed, 0x05e7ULL, u}));
    UserRecord rec;
    auto idx = std::to_string(u);
    rec.user_id = opts.id_prefix + std::string(width - idx.size(), '0') + idx;

    const Eigen::VectorXd mixture = draw_mixture(rng);
    std::size_t n_tweets = opts.tweets_per_user;
    if (opts.tweet_count_std > 0.0) {
      const double draw = std::round(rng.normal(static_cast<double>(opts.tweets_per_user),
                                                opts.tweet_count_std));
      n_tweets = static_cast<std::size_t>(std::max(1.0, draw));
    }
    n_tweets = std::max<std::size_t>(n_tweets, 1);

    Eigen::VectorXd sum = Eigen::VectorXd::Zero(dim);
    std::size_t n_tokens = 0;
    rec.tweets.reserve(n_tweets);
    for (std::size_t t = 0; t < n_tweets; ++t) {
      const std::size_t len =
          opts.min_tokens_per_tweet +
          rng.below(opts.max_tokens_per_tweet - opts.min_tokens_per_tweet + 1);
      std::vector<std::string> words;
      words.reserve(len + 3);
      for (std::size_t k = 0; k < len; ++k) {
        double r = rng.uniform();
        Eigen::Index topic = 0;
        while (topic + 1 < n_active && r >= mixture[topic]) r -= mixture[topic++];
        const auto& pool = topic_words[static_cast<std::size_t>(topic)];
        const std::size_t w = pool[rng.below(pool.size())];
        sum += table.vector(w);
        ++n_tokens;
        words.push_back(table.word(w));
      }
      // Surface noise that cleaning removes again.
      if (rng.uniform() < 0.1 && !words.front().empty()) {
        words.front()[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(words.front()[0])));
      }
      if (rng.uniform() < 0.15) {
        static constexpr std::array<std::string_view, 4> kPunct = {"!", "?", "...", "!!"};
        words.back() += kPunct[rng.below(kPunct.size())];
      }
      if (rng.uniform() < 0.05) words.push_back(std::to_string(1990 + rng.below(40)));
      if (rng.uniform() < 0.1) words.push_back("#" + random_string(rng, kLetters, 3 + rng.below(6)));
      if (rng.uniform() < 0.05) words.push_back("https://t.co/" + random_string(rng, kAlnum, 10));
      std::string text;
      for (const auto& w : words) {
        if (!text.empty()) text.push_back(' ');
        text += w;
      }
      rec.tweets.push_back(std::move(text));
    }

    const Eigen::VectorXd mean_vec = sum / static_cast<double>(n_tokens);
    const Eigen::VectorXd scores = projection * mean_vec;
    for (Trait tr : kTraits) {
      const auto k = static_cast<Eigen::Index>(tr);
      const double z = cal_std[k] > 0.0 ? (scores[k] - cal_mean[k]) / cal_std[k] : 0.0;
      const double noise = opts.noise_std > 0.0 ? opts.noise_std * rng.normal() : 0.0;
      rec.traits[tr] = std::clamp(0.5 + kSynthSignalStd * z + noise, 0.0, 1.0);
    }
    corpus.push_back(std::move(rec));
  }
  return corpus;
}

}  // namespace persona
