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
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "persona/feature_vector.hpp"
#include "persona/preprocess.hpp"

namespace persona {

/// Category -> word patterns. A pattern is a literal word or a prefix ending in
/// '*'. Categories keep first-appearance order.
class Lexicon {
 public:
  struct Category {
    std::string name;
    std::vector<std::string> words;     ///< sorted, unique
    std::vector<std::string> prefixes;  ///< sorted, unique, '*' stripped
  };

  /// Throws DataError on an empty pattern or a '*' that is not final.
  void add(std::string_view category, std::string_view pattern);

  std::size_t size() const { return categories_.size(); }
  bool empty() const { return categories_.empty(); }
  const std::vector<Category>& categories() const { return categories_; }
  std::size_t pattern_count() const;

  bool matches(std::size_t category, std::string_view token) const;

  std::uint64_t content_hash() const;

 private:
  std::vector<Category> categories_;
};

/// `category<TAB>pattern` per line; '#' at line start is a comment.
Lexicon parse_lexicon(std::string_view text, std::string_view source = "<lexicon>");
Lexicon load_lexicon(const std::filesystem::path& path);
std::string format_lexicon(const Lexicon& lex);

/// One value per category: matching occurrences / total tokens. A token may
/// count towards several categories.
FeatureVector lexicon_features(const TokenStream& tokens, const Lexicon& lex);

/// Random word-category lexicon for synthetic experiments. Word i is a
/// candidate for category i % n_categories and is kept with probability
/// `keep` (the first n_categories words always). A few entries become
/// three-letter prefix patterns.
Lexicon make_synthetic_lexicon(std::span<const std::string> words, std::size_t n_categories, double keep,
                               std::uint64_t seed);

}  // namespace persona
