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

#include "persona/ngram.hpp"

#include <algorithm>

#include "persona/error.hpp"
#include "persona/io.hpp"

namespace persona {

NgramVocab::NgramVocab(NgramOptions opts, std::vector<std::vector<NgramEntry>> orders)
    : opts_(opts), orders_(std::move(orders)) {
  opts_.max_n = static_cast<int>(orders_.size());
  lookup_.resize(orders_.size());
  for (std::size_t k = 0; k < orders_.size(); ++k) {
    offsets_.push_back(dimension_);
    dimension_ += orders_[k].size();
    for (std::size_t i = 0; i < orders_[k].size(); ++i) {
      if (!lookup_[k].emplace(orders_[k][i].gram, i).second) {
        throw DataError("duplicate n-gram '" + orders_[k][i].gram + "' in vocabulary");
      }
    }
  }
}

std::optional<std::size_t> NgramVocab::index_of(int n, std::string_view gram) const {
  if (n < 1 || n > max_n()) return std::nullopt;
  const auto& m = lookup_[static_cast<std::size_t>(n - 1)];
  auto it = m.find(gram);
  if (it == m.end()) return std::nullopt;
  return it->second;
}

std::uint64_t NgramVocab::content_hash() const {
  Fnv1a h;
  h.u64(opts_.per_tweet ? 1 : 0);
  for (const auto& order : orders_) {
    h.u64(order.size());
    for (const auto& e : order) h.str(e.gram).u64(e.count);
  }
  return h.value();
}

std::size_t ngram_positions(const TokenStream& ts, int n, bool per_tweet) {
  const auto un = static_cast<std::size_t>(n);
  auto count = [un](std::size_t len) { return len >= un ? len - un + 1 : 0; };
  if (!per_tweet) return count(ts.tokens.size());
  std::size_t total = 0;
  for (auto seg : ts.segments()) total += count(seg.size());
  return total;
}

NgramVocab build_ngram_vocab(std::span<const TokenStream> streams, const NgramOptions& opts) {
  if (opts.cap_per_order < 1) throw DataError("n-gram cap per order must be at least 1");
  if (opts.max_n < 1 || opts.max_n > 3) throw DataError("n-gram order must be 1, 2 or 3");
  std::vector<std::vector<NgramEntry>> orders;
  for (int n = 1; n <= opts.max_n; ++n) {
    std::unordered_map<std::string, std::uint64_t, detail::StringHash, std::equal_to<>> counts;
    for (const auto& ts : streams) {
      for_each_ngram(ts, n, opts.per_tweet, [&](std::string_view g) {
        auto it = counts.find(g);
        if (it == counts.end()) {
          counts.emplace(std::string(g), 1);
        } else {
          ++it->second;
        }
      });
    }
    std::vector<NgramEntry> entries;
    entries.reserve(counts.size());
    for (auto& [g, c] : counts) entries.push_back({g, c});
    auto better = [](const NgramEntry& a, const NgramEntry& b) {
      return a.count != b.count ? a.count > b.count : a.gram < b.gram;
    };
    if (entries.size() > opts.cap_per_order) {
      const auto cut = entries.begin() + static_cast<std::ptrdiff_t>(opts.cap_per_order);
      std::partial_sort(entries.begin(), cut, entries.end(), better);
      entries.erase(cut, entries.end());
    } else {
      std::sort(entries.begin(), entries.end(), better);
    }
    orders.push_back(std::move(entries));
  }
  return NgramVocab(opts, std::move(orders));
}

FeatureVector ngram_features(const TokenStream& tokens, const NgramVocab& vocab) {
  FeatureVector fv;
  fv.values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(vocab.dimension()));
  fv.total_tokens = tokens.tokens.size();
  const bool per_tweet = vocab.options().per_tweet;
  for (int n = 1; n <= vocab.max_n(); ++n) {
    const std::size_t positions = ngram_positions(tokens, n, per_tweet);
    if (positions == 0) continue;
    const std::size_t base = vocab.offset(n);
    std::size_t hits = 0;
    for_each_ngram(tokens, n, per_tweet, [&](std::string_view g) {
      if (auto i = vocab.index_of(n, g)) {
        fv.values[static_cast<Eigen::Index>(base + *i)] += 1.0;
        ++hits;
      }
    });
    if (n == 1) fv.covered_tokens = hits;
    const auto len = static_cast<Eigen::Index>(vocab.order(n).size());
    fv.values.segment(static_cast<Eigen::Index>(base), len) /= static_cast<double>(positions);
  }
  return fv;
}

}  // namespace persona
