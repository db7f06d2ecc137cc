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
#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "persona/featurizer.hpp"
#include "persona/gp.hpp"
#include "persona/ridge.hpp"
#include "persona/standardizer.hpp"
#include "persona/traits.hpp"

namespace persona {

enum class ModelKind { gp, ridge };

std::string_view to_string(ModelKind kind);
std::optional<ModelKind> model_kind_from_string(std::string_view s);

using TraitModel = std::variant<RidgeModel<double>, GpModel<double>>;

struct TrainConfig {
  std::vector<double> lambda_grid = default_lambda_grid();
  /// Used when no explicit validation rows are passed to train_big5.
  double val_fraction = 0.25;
  std::uint64_t seed = 0;
  OptimizeOptions gp;
  /// Clamp predictions to [0,1]. Off by default: clamping distorts Pearson r.
  bool clamp_predictions = false;
};

/// Five per-trait regressors sharing one feature pipeline and standardizer.
struct TraitModelBundle {
  static constexpr int kVersion = 1;

  ModelKind method = ModelKind::gp;
  std::optional<Featurizer> featurizer;
  Standardizer<double> standardizer;
  std::array<TraitModel, kNumTraits> models;
  bool clamp_predictions = false;

  /// Fingerprint of the feature pipeline ("" when no featurizer attached).
  std::string feature_fingerprint() const {
    return featurizer ? featurizer->fingerprint() : std::string();
  }

  /// Raw (unstandardized) features, one row per user -> N x 5 predictions.
  Eigen::MatrixXd predict_rows(const Eigen::Ref<const Eigen::MatrixXd>& raw) const;
  TraitScores predict(const Eigen::Ref<const Eigen::VectorXd>& raw) const;

  /// Featurizes and predicts; requires an attached featurizer.
  TraitScores predict_tokens(const TokenStream& tokens) const;

  /// Hyperparameters chosen per trait, for summaries.
  std::string describe_trait(Trait t) const;
};

/// Fits one model per trait on identical standardized inputs. Ridge tunes
/// lambda on `validation_rows` (or a seeded val_fraction split when empty)
/// and refits on all rows; GP maximises the marginal likelihood on all rows.
TraitModelBundle train_big5(const Eigen::Ref<const Eigen::MatrixXd>& features,
                            std::span<const TraitScores> traits, ModelKind method,
                            const TrainConfig& config = {},
                            std::span<const std::size_t> validation_rows = {});

std::string format_bundle(const TraitModelBundle& bundle);
void save_bundle(const std::filesystem::path& path, const TraitModelBundle& bundle);

/// Restores a bundle; the feature resources must match the stored content
/// hashes (DataError otherwise). The GP Cholesky factor is recomputed and the
/// stored alpha checksum verified.
TraitModelBundle parse_bundle(std::string_view text, const FeatureResources& res);
TraitModelBundle load_bundle(const std::filesystem::path& path, const FeatureResources& res);

/// Feature kind stored in a bundle file, to know which resources to load.
FeatureKind peek_bundle_feature_kind(std::string_view text);

}  // namespace persona
