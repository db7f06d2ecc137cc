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

#include <Eigen/Core>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "persona/corpus.hpp"
#include "persona/embedding.hpp"
#include "persona/io.hpp"
#include "persona/rng.hpp"

namespace persona::fixtures {

/// Expands \t, \\, \uXXXX and \UXXXXXXXX into UTF-8.
inline std::string unescape(std::string_view s) {
  std::string out;
  auto put = [&](char32_t cp) {
    if (cp < 0x80) {
      out += static_cast<char>(cp);
    } else if (cp < 0x800) {
      out += static_cast<char>(0xC0 | (cp >> 6));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
      out += static_cast<char>(0xE0 | (cp >> 12));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
      out += static_cast<char>(0xF0 | (cp >> 18));
      out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    }
  };
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\' || i + 1 >= s.size()) {
      out += s[i];
      continue;
    }
    const char k = s[++i];
    if (k == 't') {
      out += '\t';
    } else if (k == '\\') {
      out += '\\';
    } else if (k == 'u' || k == 'U') {
      const std::size_t len = k == 'u' ? 4 : 8;
      put(static_cast<char32_t>(std::stoul(std::string(s.substr(i + 1, len)), nullptr, 16)));
      i += len;
    } else {
      out += '\\';
      out += k;
    }
  }
  return out;
}

/// (input, expected) pairs; the first line is a header.
inline std::vector<std::pair<std::string, std::string>> load_golden(const std::filesystem::path& path) {
  std::vector<std::pair<std::string, std::string>> cases;
  const auto text = read_file(path);
  const auto lines = split_lines(text);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto tab = lines[i].find('\t');
    if (tab == std::string_view::npos) continue;
    cases.emplace_back(unescape(lines[i].substr(0, tab)), unescape(lines[i].substr(tab + 1)));
  }
  return cases;
}

inline std::filesystem::path data_dir() { return PERSONA_TEST_DATA; }

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("persona_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

inline Eigen::MatrixXd random_matrix(Rng& rng, Eigen::Index r, Eigen::Index c) {
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index j = 0; j < c; ++j) {
    for (Eigen::Index i = 0; i < r; ++i) m(i, j) = rng.normal();
  }
  return m;
}

inline Eigen::VectorXd random_vector(Rng& rng, Eigen::Index n) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.normal();
  return v;
}

/// Small synthetic table + corpus pair for fast tests.
struct SmallWorld {
  EmbeddingTable table;
  Corpus corpus;
};

inline SmallWorld small_world(std::size_t users, std::size_t tweets, double noise, std::uint64_t seed) {
  SmallWorld w;
  w.table = make_synthetic_embeddings(400, 12, 6, seed);
  SynthOptions o;
  o.n_users = users;
  o.tweets_per_user = tweets;
  o.noise_std = noise;
  o.seed = seed;
  o.n_topics = 6;
  w.corpus = generate_synthetic(o, w.table);
  return w;
}

}  // namespace persona::fixtures
