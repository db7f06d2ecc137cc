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

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "persona/traits.hpp"

namespace persona {

class EmbeddingTable;

struct UserRecord {
  std::string user_id;
  std::vector<std::string> tweets;
  TraitScores traits;

  friend bool operator==(const UserRecord&, const UserRecord&) = default;
};

using Corpus = std::vector<UserRecord>;

/// Inclusive range of the raw survey scale.
struct RawScale {
  double min = 0.0;
  double max = 1.0;
};

struct LoadOptions {
  std::size_t min_tweets = 0;
  /// When set, traits in the file are raw survey scores on this scale and are
  /// normalized on load; otherwise they must already lie in [0,1].
  std::optional<RawScale> raw_scale;
  /// Drop tweets starting with "RT " before counting.
  bool drop_retweets = false;
  /// When false, records without "traits" load with NaN scores (prediction input).
  bool require_traits = true;
};

struct LoadSummary {
  std::size_t users_read = 0;
  std::size_t users_kept = 0;
  std::size_t users_dropped = 0;  ///< below min_tweets
  std::size_t retweets_dropped = 0;
};

Corpus load_corpus(const std::filesystem::path& path, const LoadOptions& opts = {},
                   LoadSummary* summary = nullptr);

/// Parses corpus text (one JSON object per line). `source` names the input in
/// error messages.
Corpus parse_corpus(std::string_view text, const LoadOptions& opts = {},
                    LoadSummary* summary = nullptr,
                    std::string_view source = "<corpus>");

std::string format_corpus(const Corpus& corpus);
void save_corpus(const std::filesystem::path& path, const Corpus& corpus);

/// Affine map of [raw_min, raw_max] onto [0,1].
double normalize_score(double raw, double raw_min, double raw_max);

struct CorpusStats {
  std::size_t user_count = 0;
  std::array<double, kNumTraits> trait_mean{};
  std::array<double, kNumTraits> trait_std{};  ///< population std
  double tweet_count_mean = 0.0;
  double tweet_count_std = 0.0;
};

CorpusStats corpus_stats(const Corpus& records);

struct SynthOptions {
  std::size_t n_users = 300;
  std::size_t tweets_per_user = 200;
  /// Per-user tweet count ~ N(tweets_per_user, tweet_count_std), at least 1.
  double tweet_count_std = 0.0;
  /// Trait noise on the [0,1] scale. The linear signal has std 0.15, so
  /// noise_std = 0.15 gives a 50/50 split of trait variance.
  double noise_std = 0.15;
  std::uint64_t seed = 0;
  /// Seed of the trait link (projection and calibration). Corpora sharing a
  /// link seed share the same trait function; defaults to `seed`.
  std::optional<std::uint64_t> link_seed;
  std::string id_prefix = "user";
  std::size_t min_tokens_per_tweet = 6;
  std::size_t max_tokens_per_tweet = 14;
  std::size_t n_topics = 8;
};

/// Signal std on the trait scale used by generate_synthetic.
inline constexpr double kSynthSignalStd = 0.15;

/// Synthetic users whose tweets draw from the table's vocabulary and whose
/// traits are a clamped affine function of their mean word vector plus
/// Gaussian noise. A pure function of (options, table).
Corpus generate_synthetic(const SynthOptions& opts, const EmbeddingTable& table);

}  // namespace persona
