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

#include "persona/embedding.hpp"

#include <cmath>
#include <string>

#include "persona/error.hpp"
#include "persona/io.hpp"
#include "persona/rng.hpp"

namespace persona {
namespace {

std::vector<std::string_view> fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    const auto start = line.find_first_not_of(" \t", pos);
    if (start == std::string_view::npos) break;
    auto stop = line.find_first_of(" \t", start);
    if (stop == std::string_view::npos) stop = line.size();
    out.push_back(line.substr(start, stop - start));
    pos = stop;
  }
  return out;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char ch : s) {
    if (ch < '0' || ch > '9') return false;
  }
  return true;
}

std::string where(std::string_view source, std::size_t line_no) {
  return std::string(source) + ":" + std::to_string(line_no) + ": ";
}

}  // namespace

void EmbeddingTable::add(std::string word, const Eigen::Ref<const Eigen::VectorXd>& vec) {
  if (dim_ == 0 && words_.empty()) dim_ = vec.size();
  if (vec.size() != dim_) {
    throw DataError("embedding for '" + word + "' has " + std::to_string(vec.size()) +
                    " entries, expected " + std::to_string(dim_));
  }
  if (!vec.allFinite()) throw DataError("embedding for '" + word + "' is not finite");
  if (index_.contains(word)) throw DataError("duplicate embedding word '" + word + "'");
  index_.emplace(word, words_.size());
  words_.push_back(std::move(word));
  data_.insert(data_.end(), vec.data(), vec.data() + vec.size());
}

std::uint64_t EmbeddingTable::content_hash() const {
  Fnv1a h;
  h.u64(static_cast<std::uint64_t>(dim_));
  for (std::size_t i = 0; i < words_.size(); ++i) {
    h.str(words_[i]);
    const auto v = vector(i);
    for (Eigen::Index d = 0; d < dim_; ++d) h.f64(v[d]);
  }
  return h.value();
}

EmbeddingTable parse_embeddings(std::string_view text,
                                std::optional<Eigen::Index> expected_dim,
                                std::string_view source) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  const auto lines = split_lines(text);
  EmbeddingTable table;
  std::optional<Eigen::Index> dim = expected_dim;
  bool first_content = true;
  Eigen::VectorXd buf;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    const auto f = fields(lines[i]);
    if (f.empty()) continue;
    if (first_content) {
      first_content = false;
      if (f.size() == 2 && all_digits(f[0]) && all_digits(f[1])) {
        const auto header_dim = static_cast<Eigen::Index>(std::stoll(std::string(f[1])));
        if (dim && *dim != header_dim) {
          throw DataError(where(source, line_no) + "header dimension " +
                          std::to_string(header_dim) + " does not match expected " +
                          std::to_string(*dim));
        }
        dim = header_dim;
        continue;
      }
    }
    if (f.size() < 2) {
      throw DataError(where(source, line_no) + "expected a word followed by values");
    }
    const auto row_dim = static_cast<Eigen::Index>(f.size() - 1);
    if (!dim) {
      dim = row_dim;
    } else if (row_dim != *dim) {
      throw DataError(where(source, line_no) + "row has " + std::to_string(row_dim) +
                      " values, expected " + std::to_string(*dim));
    }
    buf.resize(row_dim);
    for (Eigen::Index d = 0; d < row_dim; ++d) {
      double v;
      if (!parse_double(f[static_cast<std::size_t>(d) + 1], v) || !std::isfinite(v)) {
        throw DataError(where(source, line_no) + "non-numeric entry '" +
                        std::string(f[static_cast<std::size_t>(d) + 1]) + "'");
      }
      buf[d] = v;
    }
    if (table.empty()) table = EmbeddingTable(row_dim);
    try {
      table.add(std::string(f[0]), buf);
    } catch (const DataError& e) {
      throw DataError(where(source, line_no) + e.what());
    }
  }
  if (table.empty() && dim) table = EmbeddingTable(*dim);
  return table;
}

EmbeddingTable load_embeddings(const std::filesystem::path& path,
                               std::optional<Eigen::Index> expected_dim) {
  return parse_embeddings(read_file(path), expected_dim, path.string());
}

std::string format_embeddings(const EmbeddingTable& table) {
  std::string out;
  for (std::size_t i = 0; i < table.size(); ++i) {
    out += table.word(i);
    const auto v = table.vector(i);
    for (Eigen::Index d = 0; d < v.size(); ++d) {
      out.push_back(' ');
      out += format_double(v[d]);
    }
    out.push_back('\n');
  }
  return out;
}

void save_embeddings(const std::filesystem::path& path, const EmbeddingTable& table) {
  write_file_atomic(path, format_embeddings(table));
}

FeatureVector embed_average(const TokenStream& tokens, const EmbeddingTable& table,
                            OovPolicy policy) {
  if (table.empty()) throw DataError("embedding table is empty");
  FeatureVector fv;
  fv.values = Eigen::VectorXd::Zero(table.dimension());
  fv.total_tokens = tokens.tokens.size();
  for (const auto& tok : tokens.tokens) {
    if (auto idx = table.find(tok)) {
      fv.values += table.vector(*idx);
      ++fv.covered_tokens;
    }
  }
  if (fv.covered_tokens == 0) {
    if (policy == OovPolicy::error) throw NoCoveredTokensError();
    return fv;
  }
  fv.values /= static_cast<double>(fv.covered_tokens);
  return fv;
}

EmbeddingTable make_synthetic_embeddings(std::size_t vocab_size, Eigen::Index dimension,
                                         std::size_t n_topics, std::uint64_t seed) {
  if (vocab_size == 0 || dimension <= 0 || n_topics == 0) {
    throw DataError("synthetic embeddings need vocab, dimension and topics > 0");
  }
  static constexpr std::string_view kOnsets = "bdfghklmnprstvz";
  static constexpr std::string_view kVowels = "aeiou";
  const std::size_t base = kOnsets.size() * kVowels.size();
  std::size_t syllables = 2;
  for (std::size_t cap = base * base; cap < vocab_size; cap *= base) ++syllables;

  Rng rng(derive_seed({seed, 0xe111be6dULL}));
  Eigen::MatrixXd centroids(dimension, static_cast<Eigen::Index>(n_topics));
  for (Eigen::Index k = 0; k < centroids.cols(); ++k) {
    for (Eigen::Index d = 0; d < dimension; ++d) centroids(d, k) = rng.normal();
  }

  EmbeddingTable table(dimension);
  Eigen::VectorXd v(dimension);
  for (std::size_t i = 0; i < vocab_size; ++i) {
    std::string word;
    std::size_t code = i;
    for (std::size_t s = 0; s < syllables; ++s) {
      const std::size_t syl = code % base;
      code /= base;
      word.push_back(kOnsets[syl / kVowels.size()]);
      word.push_back(kVowels[syl % kVowels.size()]);
    }
    const auto topic = static_cast<Eigen::Index>(i % n_topics);
    for (Eigen::Index d = 0; d < dimension; ++d) {
      v[d] = centroids(d, topic) + 0.5 * rng.normal();
    }
    table.add(std::move(word), v);
  }
  return table;
}

}  // namespace persona
