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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "persona/embedding.hpp"
#include "persona/feature_vector.hpp"
#include "persona/preprocess.hpp"

namespace persona {

struct NgramOptions {
  int max_n = 3;
  std::size_t cap_per_order = 2000;
  /// Count n-grams inside each tweet only instead of across the user's
  /// concatenated stream.
  bool per_tweet = false;
};

struct NgramEntry {
  std::string gram;  ///< tokens joined by single spaces
  std::uint64_t count = 0;
  friend bool operator==(const NgramEntry&, const NgramEntry&) = default;
};

/// Top-K n-grams per order, sorted by descending count then ascending gram.
/// Feature layout: order 1 entries, then order 2, then order 3.
class NgramVocab {
 public:
  NgramVocab() = default;
  NgramVocab(NgramOptions opts, std::vector<std::vector<NgramEntry>> orders);

  const NgramOptions& options() const { return opts_; }
  int max_n() const { return static_cast<int>(orders_.size()); }
  /// Entries of order n (1-based).
  const std::vector<NgramEntry>& order(int n) const {
    return orders_[static_cast<std::size_t>(n - 1)];
  }
  std::size_t offset(int n) const { return offsets_[static_cast<std::size_t>(n - 1)]; }
  std::size_t dimension() const { return dimension_; }

  /// Position of `gram` within its order's list.
  std::optional<std::size_t> index_of(int n, std::string_view gram) const;

  std::uint64_t content_hash() const;

  friend bool operator==(const NgramVocab& a, const NgramVocab& b) {
    return a.orders_ == b.orders_ && a.opts_.per_tweet == b.opts_.per_tweet;
  }

 private:
  NgramOptions opts_;
  std::vector<std::vector<NgramEntry>> orders_;
  std::vector<std::size_t> offsets_;
  std::size_t dimension_ = 0;
  std::vector<std::unordered_map<std::string, std::size_t, detail::StringHash, std::equal_to<>>>
      lookup_;
};

/// Calls `fn(gram)` for every n-gram position of order n, honouring the
/// per-tweet option. `gram` is only valid during the call.
template <typename Fn>
void for_each_ngram(const TokenStream& ts, int n, bool per_tweet, Fn&& fn) {
  std::string key;
  auto window = [&](std::span<const std::string> toks) {
    const auto un = static_cast<std::size_t>(n);
    if (toks.size() < un) return;
    for (std::size_t i = 0; i + un <= toks.size(); ++i) {
      key.clear();
      for (std::size_t j = 0; j < un; ++j) {
        if (j) key.push_back(' ');
        key += toks[i + j];
      }
      fn(std::string_view(key));
    }
  };
  if (per_tweet) {
    for (auto seg : ts.segments()) window(seg);
  } else {
    window(ts.tokens);
  }
}

/// Number of n-gram positions of order n in the stream.
std::size_t ngram_positions(const TokenStream& ts, int n, bool per_tweet);

/// Counts over all streams (training users only), then keeps the top
/// cap_per_order per order.
NgramVocab build_ngram_vocab(std::span<const TokenStream> streams, const NgramOptions& opts = {});

/// Relative frequency of each vocabulary n-gram among the stream's positions
/// of that order.
FeatureVector ngram_features(const TokenStream& tokens, const NgramVocab& vocab);

}  // namespace persona
