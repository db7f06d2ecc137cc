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
#include <algorithm>
#include <cmath>
#include <string>

#include "persona/error.hpp"

namespace persona {

/// Per-column z-scoring learned from a training matrix (rows = samples).
/// Columns with zero variance keep a unit scale and map to exactly 0.
template <typename Scalar>
struct Standardizer {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Vector mean;
  Vector scale;                         ///< population std, or 1 for constant columns
  Eigen::Array<bool, Eigen::Dynamic, 1> constant;

  Eigen::Index dimension() const { return mean.size(); }

  Vector apply(const Eigen::Ref<const Vector>& x) const {
    if (x.size() != mean.size()) {
      throw DataError("standardizer expects " + std::to_string(mean.size()) +
                      " features, got " + std::to_string(x.size()));
    }
    Vector z = (x - mean).cwiseQuotient(scale);
    for (Eigen::Index j = 0; j < z.size(); ++j) {
      if (constant[j]) z[j] = Scalar(0);
    }
    return z;
  }

  /// Row-wise apply.
  Matrix apply_rows(const Eigen::Ref<const Matrix>& X) const {
    if (X.cols() != mean.size()) {
      throw DataError("standardizer expects " + std::to_string(mean.size()) +
                      " features, got " + std::to_string(X.cols()));
    }
    Matrix Z = (X.rowwise() - mean.transpose()).array().rowwise() /
               scale.transpose().array();
    for (Eigen::Index j = 0; j < Z.cols(); ++j) {
      if (constant[j]) Z.col(j).setZero();
    }
    return Z;
  }
};

template <typename Derived>
Standardizer<typename Derived::Scalar> fit_standardizer(const Eigen::MatrixBase<Derived>& X) {
  using Scalar = typename Derived::Scalar;
  if (X.rows() < 2) throw DataError("standardizer needs at least 2 rows");
  Standardizer<Scalar> s;
  const auto n = static_cast<Scalar>(X.rows());
  s.mean = X.colwise().mean().transpose();
  s.scale.resize(X.cols());
  s.constant.resize(X.cols());
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const Scalar var = (X.col(j).array() - s.mean[j]).square().sum() / n;
    const Scalar sd = std::sqrt(var);
    const Scalar tol = Scalar(1e-12) * std::max(Scalar(1), std::abs(s.mean[j]));
    s.constant[j] = !(sd > tol);
    s.scale[j] = s.constant[j] ? Scalar(1) : sd;
  }
  return s;
}

}  // namespace persona
