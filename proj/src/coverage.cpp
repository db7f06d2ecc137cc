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

#include "persona/coverage.hpp"

#include "persona/error.hpp"

namespace persona {
namespace {

CoverageEntry make_entry(std::string label, std::uint64_t covered, std::uint64_t total) {
  return {std::move(label), covered, total,
          total == 0 ? 0.0 : static_cast<double>(covered) / static_cast<double>(total)};
}

void require_tokens(std::span<const TokenStream> streams) {
  if (streams.empty()) throw DataError("coverage needs at least one token stream");
  for (const auto& s : streams) {
    if (!s.empty()) return;
  }
  throw DataError("coverage needs at least one token");
}

template <typename Pred>
CoverageReport token_coverage(std::span<const TokenStream> streams, std::string name, Pred covered) {
  require_tokens(streams);
  std::uint64_t hit = 0, total = 0;
  for (const auto& s : streams) {
    for (const auto& tok : s.tokens) {
      ++total;
      if (covered(tok)) ++hit;
    }
  }
  CoverageReport r;
  r.extractor = std::move(name);
  r.entries.push_back(make_entry("tokens", hit, total));
  return r;
}

}  // namespace

CoverageReport coverage_report(std::span<const TokenStream> streams, const EmbeddingTable& table) {
  return token_coverage(streams, "embedding",
                        [&](const std::string& t) { return table.contains(t); });
}

CoverageReport coverage_report(std::span<const TokenStream> streams, const Lexicon& lex) {
  return token_coverage(streams, "lexicon", [&](const std::string& t) {
    for (std::size_t c = 0; c < lex.size(); ++c) {
      if (lex.matches(c, t)) return true;
    }
    return false;
  });
}

CoverageReport coverage_report(std::span<const TokenStream> streams, const NgramVocab& vocab) {
  require_tokens(streams);
  CoverageReport r;
  r.extractor = "ngram";
  const bool per_tweet = vocab.options().per_tweet;
  for (int n = 1; n <= vocab.max_n(); ++n) {
    std::uint64_t hit = 0, total = 0;
    for (const auto& s : streams) {
      for_each_ngram(s, n, per_tweet, [&](std::string_view g) {
        ++total;
        if (vocab.index_of(n, g)) ++hit;
      });
    }
    r.entries.push_back(make_entry("order" + std::to_string(n), hit, total));
  }
  return r;
}

}  // namespace persona
