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

#include "persona/featurizer.hpp"

#include "persona/error.hpp"
#include "persona/io.hpp"

namespace persona {

std::string_view to_string(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::embedding:
      return "embedding";
    case FeatureKind::lexicon:
      return "lexicon";
    case FeatureKind::ngram:
      return "ngram";
  }
  return "?";
}

std::optional<FeatureKind> feature_kind_from_string(std::string_view s) {
  if (s == "embedding") return FeatureKind::embedding;
  if (s == "lexicon") return FeatureKind::lexicon;
  if (s == "ngram") return FeatureKind::ngram;
  return std::nullopt;
}

Featurizer::Featurizer(FeatureOptions opts, FeatureResources res, std::optional<NgramVocab> vocab)
    : opts_(std::move(opts)), res_(std::move(res)), vocab_(std::move(vocab)) {
  switch (opts_.kind) {
    case FeatureKind::embedding:
      if (!res_.embeddings || res_.embeddings->empty()) {
        throw DataError("embedding features need a nonempty embedding table");
      }
      resource_hash_ = res_.embeddings->content_hash();
      break;
    case FeatureKind::lexicon:
      if (!res_.lexicon) throw DataError("lexicon features need a lexicon");
      resource_hash_ = res_.lexicon->content_hash();
      break;
    case FeatureKind::ngram:
      if (!vocab_) throw DataError("n-gram features need a fitted vocabulary");
      resource_hash_ = 0;
      break;
  }
}

Featurizer Featurizer::fit(const FeatureOptions& opts, const FeatureResources& res,
                           std::span<const TokenStream> training) {
  std::optional<NgramVocab> vocab;
  if (opts.kind == FeatureKind::ngram) vocab = build_ngram_vocab(training, opts.ngram);
  return Featurizer(opts, res, std::move(vocab));
}

Featurizer Featurizer::restore(const FeatureOptions& opts, const FeatureResources& res,
                               std::optional<NgramVocab> vocab, std::uint64_t expected_resource_hash) {
  Featurizer f(opts, res, std::move(vocab));
  if (f.resource_hash_ != expected_resource_hash) {
    throw DataError("feature resources do not match the model (expected " + hex64(expected_resource_hash) +
                    ", got " + hex64(f.resource_hash_) + ")");
  }
  return f;
}

FeatureVector Featurizer::transform(const TokenStream& tokens) const {
  switch (opts_.kind) {
    case FeatureKind::embedding:
      return embed_average(tokens, *res_.embeddings, opts_.oov);
    case FeatureKind::lexicon:
      return lexicon_features(tokens, *res_.lexicon);
    case FeatureKind::ngram:
      return ngram_features(tokens, *vocab_);
  }
  throw DataError("unknown feature kind");
}

Eigen::MatrixXd Featurizer::transform_rows(std::span<const TokenStream> streams) const {
  Eigen::MatrixXd X(static_cast<Eigen::Index>(streams.size()), dimension());
  for (std::size_t i = 0; i < streams.size(); ++i) {
    X.row(static_cast<Eigen::Index>(i)) = transform(streams[i]).values.transpose();
  }
  return X;
}

Eigen::Index Featurizer::dimension() const {
  switch (opts_.kind) {
    case FeatureKind::embedding:
      return res_.embeddings->dimension();
    case FeatureKind::lexicon:
      return static_cast<Eigen::Index>(res_.lexicon->size());
    case FeatureKind::ngram:
      return static_cast<Eigen::Index>(vocab_->dimension());
  }
  return 0;
}

std::string Featurizer::fingerprint() const {
  Fnv1a h;
  h.str(to_string(opts_.kind));
  h.u64(opts_.oov == OovPolicy::error ? 0 : 1);
  h.u64(opts_.clean.hashtags == HashtagMode::drop_token ? 0 : 1);
  h.u64(opts_.clean.drop_mentions ? 1 : 0);
  h.u64(resource_hash_);
  if (vocab_) {
    h.u64(static_cast<std::uint64_t>(opts_.ngram.max_n));
    h.u64(opts_.ngram.cap_per_order);
    h.u64(vocab_->content_hash());
  }
  return hex64(h.value());
}

std::vector<TokenizedUser> tokenize_corpus(const Corpus& corpus, const CleanOptions& opts) {
  std::vector<TokenizedUser> out;
  out.reserve(corpus.size());
  for (const auto& rec : corpus) {
    TokenizedUser u;
    u.tweets = preprocess_tweets(rec.tweets, opts);
    u.all = concat(u.tweets);
    out.push_back(std::move(u));
  }
  return out;
}

}  // namespace persona
