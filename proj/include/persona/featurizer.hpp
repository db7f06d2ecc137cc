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
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "persona/corpus.hpp"
#include "persona/embedding.hpp"
#include "persona/feature_vector.hpp"
#include "persona/lexicon.hpp"
#include "persona/ngram.hpp"
#include "persona/preprocess.hpp"

namespace persona {

enum class FeatureKind { embedding, lexicon, ngram };

std::string_view to_string(FeatureKind kind);
std::optional<FeatureKind> feature_kind_from_string(std::string_view s);

/// Shared, immutable extractor resources. Only the ones a feature kind needs
/// must be set.
struct FeatureResources {
  std::shared_ptr<const EmbeddingTable> embeddings;
  std::shared_ptr<const Lexicon> lexicon;
};

struct FeatureOptions {
  FeatureKind kind = FeatureKind::embedding;
  OovPolicy oov = OovPolicy::error;
  NgramOptions ngram;
  CleanOptions clean;
};

/// An extractor bound to its resources and, for n-grams, to a vocabulary
/// fitted on training streams.
class Featurizer {
 public:
  /// Fits data-dependent state (the n-gram vocabulary) on `training` only.
  static Featurizer fit(const FeatureOptions& opts, const FeatureResources& res,
                        std::span<const TokenStream> training);

  /// Rebuilds a fitted featurizer from persisted state. Throws DataError if
  /// `expected_resource_hash` does not match the supplied resource.
  static Featurizer restore(const FeatureOptions& opts, const FeatureResources& res,
                            std::optional<NgramVocab> vocab, std::uint64_t expected_resource_hash);

  FeatureVector transform(const TokenStream& tokens) const;

  /// One row per stream.
  Eigen::MatrixXd transform_rows(std::span<const TokenStream> streams) const;

  Eigen::Index dimension() const;
  const FeatureOptions& options() const { return opts_; }
  const FeatureResources& resources() const { return res_; }
  const std::optional<NgramVocab>& vocab() const { return vocab_; }

  /// Content hash of the embedding table or lexicon; 0 for n-grams.
  std::uint64_t resource_hash() const { return resource_hash_; }

  /// Hash of kind, options, resource and vocabulary, as 16 hex digits.
  std::string fingerprint() const;

 private:
  Featurizer(FeatureOptions opts, FeatureResources res, std::optional<NgramVocab> vocab);

  FeatureOptions opts_;
  FeatureResources res_;
  std::optional<NgramVocab> vocab_;
  std::uint64_t resource_hash_ = 0;
};

/// Cached preprocessing of one user: per-tweet streams plus their concatenation.
struct TokenizedUser {
  std::vector<TokenStream> tweets;
  TokenStream all;
};

std::vector<TokenizedUser> tokenize_corpus(const Corpus& corpus, const CleanOptions& opts = {});

}  // namespace persona
