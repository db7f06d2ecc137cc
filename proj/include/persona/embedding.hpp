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
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "persona/feature_vector.hpp"
#include "persona/preprocess.hpp"

namespace persona {

namespace detail {
struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const noexcept {
    return std::hash<std::string_view>{}(s);
  }
};
}  // namespace detail

/// word -> D-dimensional vector. Vectors are stored contiguously, one row per
/// word, in insertion order.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  explicit EmbeddingTable(Eigen::Index dimension) : dim_(dimension) {}

  /// Throws DataError on a duplicate word, wrong length or non-finite entry.
  void add(std::string word, const Eigen::Ref<const Eigen::VectorXd>& vec);

  Eigen::Index dimension() const { return dim_; }
  std::size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }

  const std::string& word(std::size_t i) const { return words_[i]; }
  const std::vector<std::string>& words() const { return words_; }

  std::optional<std::size_t> find(std::string_view word) const {
    auto it = index_.find(word);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  bool contains(std::string_view word) const { return index_.contains(word); }

  Eigen::Map<const Eigen::VectorXd> vector(std::size_t i) const {
    return Eigen::Map<const Eigen::VectorXd>(
        data_.data() + static_cast<std::ptrdiff_t>(i) * dim_, dim_);
  }

  /// FNV-1a over words and the bit patterns of all values.
  std::uint64_t content_hash() const;

 private:
  Eigen::Index dim_ = 0;
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t, detail::StringHash,
                     std::equal_to<>>
      index_;
  std::vector<double> data_;
};

/// GloVe text format: `word v1 ... vD` per line, optional `N D` header line.
EmbeddingTable parse_embeddings(std::string_view text,
                                std::optional<Eigen::Index> expected_dim = {},
                                std::string_view source = "<embeddings>");
EmbeddingTable load_embeddings(const std::filesystem::path& path,
                               std::optional<Eigen::Index> expected_dim = {});
std::string format_embeddings(const EmbeddingTable& table);
void save_embeddings(const std::filesystem::path& path,
                     const EmbeddingTable& table);

/// Mean of the in-vocabulary token vectors, every occurrence counted.
FeatureVector embed_average(const TokenStream& tokens, const EmbeddingTable& table,
                            OovPolicy policy = OovPolicy::error);

/// Clustered random table for synthetic experiments: word i belongs to topic
/// i % n_topics and its vector is the topic centroid plus isotropic noise.
/// Words are lowercase ASCII letters only, so they survive clean_tweet.
EmbeddingTable make_synthetic_embeddings(std::size_t vocab_size,
                                         Eigen::Index dimension,
                                         std::size_t n_topics,
                                         std::uint64_t seed);

}  // namespace persona
