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

#include "persona/lexicon.hpp"

#include <algorithm>

#include "persona/error.hpp"
#include "persona/io.hpp"
#include "persona/rng.hpp"

namespace persona {
namespace {

void insert_sorted(std::vector<std::string>& v, std::string s) {
  auto it = std::lower_bound(v.begin(), v.end(), s);
  if (it == v.end() || *it != s) v.insert(it, std::move(s));
}

}  // namespace

void Lexicon::add(std::string_view category, std::string_view pattern) {
  if (category.empty()) throw DataError("empty lexicon category name");
  if (pattern.empty()) throw DataError("empty pattern in category '" + std::string(category) + "'");
  const auto star = pattern.find('*');
  if (star != std::string_view::npos && star + 1 != pattern.size()) {
    throw DataError("pattern '" + std::string(pattern) + "' has '*' before the end");
  }
  if (pattern == "*") throw DataError("pattern '*' alone is empty");

  auto it = std::find_if(categories_.begin(), categories_.end(),
                         [&](const Category& c) { return c.name == category; });
  if (it == categories_.end()) {
    categories_.push_back({std::string(category), {}, {}});
    it = std::prev(categories_.end());
  }
  if (star == std::string_view::npos) {
    insert_sorted(it->words, std::string(pattern));
  } else {
    insert_sorted(it->prefixes, std::string(pattern.substr(0, star)));
  }
}

std::size_t Lexicon::pattern_count() const {
  std::size_t n = 0;
  for (const auto& c : categories_) n += c.words.size() + c.prefixes.size();
  return n;
}

bool Lexicon::matches(std::size_t category, std::string_view token) const {
  const auto& c = categories_[category];
  if (token.empty()) return false;
  if (std::binary_search(c.words.begin(), c.words.end(), token)) return true;
  // The only prefixes that can match sort at or before the token itself.
  auto it = std::upper_bound(c.prefixes.begin(), c.prefixes.end(), token);
  while (it != c.prefixes.begin()) {
    --it;
    if (token.starts_with(*it)) return true;
    if (it->empty() || (*it)[0] != token[0]) break;
  }
  return false;
}

std::uint64_t Lexicon::content_hash() const {
  Fnv1a h;
  for (const auto& c : categories_) {
    h.str(c.name);
    for (const auto& w : c.words) h.str(w);
    h.str("*");
    for (const auto& p : c.prefixes) h.str(p);
  }
  return h.value();
}

Lexicon parse_lexicon(std::string_view text, std::string_view source) {
  Lexicon lex;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto line = lines[i];
    if (line.empty() || line.front() == '#') continue;
    const auto ctx = std::string(source) + ":" + std::to_string(i + 1) + ": ";
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) {
      if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
      throw DataError(ctx + "expected category<TAB>pattern");
    }
    try {
      lex.add(line.substr(0, tab), line.substr(tab + 1));
    } catch (const DataError& e) {
      throw DataError(ctx + e.what());
    }
  }
  return lex;
}

Lexicon load_lexicon(const std::filesystem::path& path) {
  return parse_lexicon(read_file(path), path.string());
}

std::string format_lexicon(const Lexicon& lex) {
  std::string out;
  for (const auto& c : lex.categories()) {
    for (const auto& w : c.words) out += c.name + "\t" + w + "\n";
    for (const auto& p : c.prefixes) out += c.name + "\t" + p + "*\n";
  }
  return out;
}

FeatureVector lexicon_features(const TokenStream& tokens, const Lexicon& lex) {
  FeatureVector fv;
  const auto n_cat = lex.size();
  fv.values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_cat));
  fv.total_tokens = tokens.tokens.size();
  if (fv.total_tokens == 0) return fv;
  for (const auto& tok : tokens.tokens) {
    bool any = false;
    for (std::size_t c = 0; c < n_cat; ++c) {
      if (lex.matches(c, tok)) {
        fv.values[static_cast<Eigen::Index>(c)] += 1.0;
        any = true;
      }
    }
    if (any) ++fv.covered_tokens;
  }
  fv.values /= static_cast<double>(fv.total_tokens);
  return fv;
}

Lexicon make_synthetic_lexicon(std::span<const std::string> words, std::size_t n_categories, double keep,
                               std::uint64_t seed) {
  if (n_categories == 0) throw DataError("synthetic lexicon needs at least one category");
  if (!(keep > 0.0 && keep <= 1.0)) throw DataError("synthetic lexicon keep probability must be in (0,1]");
  Rng rng(derive_seed({seed, 0x1e71ULL}));
  Lexicon lex;
  for (std::size_t i = 0; i < words.size(); ++i) {
    const double u = rng.uniform();
    const double v = rng.uniform();
    // The first word of each category is always kept so no category is empty.
    if ((i >= n_categories && u >= keep) || words[i].empty()) continue;
    const std::string category = "cat" + std::to_string(i % n_categories);
    if (v < 0.1 && words[i].size() > 3) {
      lex.add(category, words[i].substr(0, 3) + "*");
    } else {
      lex.add(category, words[i]);
    }
  }
  return lex;
}

}  // namespace persona
