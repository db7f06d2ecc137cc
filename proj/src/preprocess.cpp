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

#include "persona/preprocess.hpp"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <cctype>
#include <cstdint>

namespace persona {
namespace {

struct CodePoint {
  UChar32 value;
  std::size_t begin;  // byte offset of the first byte in the source text
};

// Decodes UTF-8; ill-formed sequences decode to a negative value and are
// skipped by every caller.
std::vector<CodePoint> decode(std::string_view text) {
  std::vector<CodePoint> out;
  out.reserve(text.size());
  const auto* s = reinterpret_cast<const std::uint8_t*>(text.data());
  const auto length = static_cast<std::int32_t>(text.size());
  std::int32_t i = 0;
  while (i < length) {
    const auto begin = static_cast<std::size_t>(i);
    UChar32 c;
    U8_NEXT(s, i, length, c);
    out.push_back({c, begin});
  }
  return out;
}

bool is_separator(UChar32 c) {
  if (c < 0) return false;
  if (u_isUWhiteSpace(c)) return true;
  const auto mask = U_GET_GC_MASK(c);
  return (mask & U_GC_Z_MASK) != 0;
}

bool ascii_alpha(char ch) {
  return std::isalpha(static_cast<unsigned char>(ch)) != 0;
}

bool starts_with_ci(std::string_view s, std::string_view prefix) {
  if (s.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(s[i])) != prefix[i]) {
      return false;
    }
  }
  return true;
}

bool is_url(std::string_view token) {
  const auto scheme_end = token.find("://");
  if (scheme_end != std::string_view::npos && scheme_end > 0 &&
      ascii_alpha(token[scheme_end - 1])) {
    return true;
  }
  const auto first = token.find_first_not_of("([{<\"'");
  return first != std::string_view::npos &&
         starts_with_ci(token.substr(first), "www.");
}

void append_utf8(std::string& out, UChar32 c) {
  char buf[U8_MAX_LENGTH];
  std::int32_t n = 0;
  U8_APPEND_UNSAFE(buf, n, c);
  out.append(buf, static_cast<std::size_t>(n));
}

// Steps 3-5 on a single kept token.
std::string filter_token(std::span<const CodePoint> cps) {
  std::string out;
  for (const auto& cp : cps) {
    if (cp.value < 0) continue;
    const UChar32 lower = u_tolower(cp.value);
    const auto mask = U_GET_GC_MASK(lower);
    if ((mask & U_GC_L_MASK) != 0) {
      append_utf8(out, lower);
    } else if ((mask & U_GC_M_MASK) != 0 && !out.empty()) {
      append_utf8(out, lower);
    }
    // N*, P*, S*, C* and stray marks are deleted.
  }
  return out;
}

}  // namespace

std::string clean_tweet(std::string_view text, const CleanOptions& opts) {
  const auto cps = decode(text);
  std::string out;
  std::size_t i = 0;
  while (i < cps.size()) {
    if (is_separator(cps[i].value)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < cps.size() && !is_separator(cps[j].value)) ++j;
    const std::size_t byte_end = j < cps.size() ? cps[j].begin : text.size();
    const auto raw = text.substr(cps[i].begin, byte_end - cps[i].begin);

    bool drop = is_url(raw);
    if (!drop && raw.front() == '#' && opts.hashtags == HashtagMode::drop_token) {
      drop = true;
    }
    if (!drop && raw.front() == '@' && opts.drop_mentions) drop = true;

    if (!drop) {
      auto word = filter_token(std::span(cps).subspan(i, j - i));
      if (!word.empty()) {
        if (!out.empty()) out.push_back(' ');
        out += word;
      }
    }
    i = j;
  }
  return out;
}

std::vector<std::span<const std::string>> TokenStream::segments() const {
  std::vector<std::span<const std::string>> out;
  const std::span<const std::string> all(tokens);
  if (tweet_offsets.empty()) {
    out.push_back(all);
    return out;
  }
  out.reserve(tweet_offsets.size());
  for (std::size_t k = 0; k < tweet_offsets.size(); ++k) {
    const std::size_t begin = std::min(tweet_offsets[k], tokens.size());
    const std::size_t end = k + 1 < tweet_offsets.size()
                                ? std::min(tweet_offsets[k + 1], tokens.size())
                                : tokens.size();
    out.push_back(all.subspan(begin, end - begin));
  }
  return out;
}

TokenStream tokenize(std::string_view cleaned) {
  TokenStream ts;
  std::size_t pos = 0;
  while (pos < cleaned.size()) {
    const auto start = cleaned.find_first_not_of(" \t\n\r\f\v", pos);
    if (start == std::string_view::npos) break;
    auto stop = cleaned.find_first_of(" \t\n\r\f\v", start);
    if (stop == std::string_view::npos) stop = cleaned.size();
    ts.tokens.emplace_back(cleaned.substr(start, stop - start));
    pos = stop;
  }
  ts.raw_token_count = ts.tokens.size();
  ts.tweet_offsets = {0};
  return ts;
}

std::vector<TokenStream> preprocess_tweets(std::span<const std::string> tweets,
                                           const CleanOptions& opts) {
  std::vector<TokenStream> out;
  out.reserve(tweets.size());
  for (const auto& t : tweets) out.push_back(tokenize(clean_tweet(t, opts)));
  return out;
}

TokenStream concat(std::span<const TokenStream> parts) {
  TokenStream ts;
  std::size_t total = 0;
  for (const auto& p : parts) total += p.tokens.size();
  ts.tokens.reserve(total);
  for (const auto& p : parts) {
    const std::size_t base = ts.tokens.size();
    if (p.tweet_offsets.empty()) {
      if (!p.tokens.empty()) ts.tweet_offsets.push_back(base);
    } else {
      for (std::size_t off : p.tweet_offsets) ts.tweet_offsets.push_back(base + off);
    }
    ts.tokens.insert(ts.tokens.end(), p.tokens.begin(), p.tokens.end());
  }
  ts.raw_token_count = ts.tokens.size();
  return ts;
}

TokenStream preprocess_user(std::span<const std::string> tweets,
                            const CleanOptions& opts) {
  const auto per_tweet = preprocess_tweets(tweets, opts);
  return concat(per_tweet);
}

}  // namespace persona
