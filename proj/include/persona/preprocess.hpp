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

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace persona {

enum class HashtagMode {
  drop_token,   ///< "#cool" disappears entirely
  strip_symbol  ///< only '#' is removed, "cool" survives
};

struct CleanOptions {
  HashtagMode hashtags = HashtagMode::drop_token;
  bool drop_mentions = false;  ///< delete "@user" tokens instead of keeping "user"
};

/// Tweet cleaning, applied in order:
///   1. delete URL tokens (scheme://... or www....)
///   2. delete hashtag tokens
///   3. lowercase
///   4. delete number characters (Unicode N*)
///   5. delete punctuation and symbols (Unicode P*, S*)
/// Separators become single spaces; control/format/unassigned code points and
/// combining marks that do not follow a letter are deleted. The result holds
/// only lowercase letters, attached marks and single spaces, and is trimmed.
std::string clean_tweet(std::string_view text, const CleanOptions& opts = {});

/// Tokens of one user (or one tweet). `tweet_offsets[i]` is the index of the
/// first token of tweet i, so per-tweet windows can be recovered after
/// concatenation.
struct TokenStream {
  std::vector<std::string> tokens;
  std::size_t raw_token_count = 0;
  std::vector<std::size_t> tweet_offsets;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }

  /// Half-open token ranges, one per tweet. A stream built without offsets is
  /// a single segment.
  std::vector<std::span<const std::string>> segments() const;

  friend bool operator==(const TokenStream&, const TokenStream&) = default;
};

/// Whitespace split of an already cleaned string.
TokenStream tokenize(std::string_view cleaned);

/// tokenize(clean_tweet(t)) for every tweet, concatenated in order.
TokenStream preprocess_user(std::span<const std::string> tweets,
                            const CleanOptions& opts = {});

/// Per-tweet token streams; concat() of the result equals preprocess_user.
std::vector<TokenStream> preprocess_tweets(std::span<const std::string> tweets,
                                           const CleanOptions& opts = {});

/// Concatenates streams, recording one tweet offset per input stream.
TokenStream concat(std::span<const TokenStream> parts);

}  // namespace persona
