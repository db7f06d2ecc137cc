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

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "persona/error.hpp"

namespace persona {

template <typename Scalar>
struct RidgeModel {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Vector weights;
  Scalar intercept = 0;
  Scalar lambda = 0;

  Eigen::Index dimension() const { return weights.size(); }

  Scalar predict(const Eigen::Ref<const Vector>& x) const {
    if (x.size() != weights.size()) {
      throw DataError("ridge model expects " + std::to_string(weights.size()) +
                      " features, got " + std::to_string(x.size()));
    }
    return weights.dot(x) + intercept;
  }

  Vector predict_rows(const Eigen::Ref<const Matrix>& X) const {
    if (X.cols() != weights.size()) {
      throw DataError("ridge model expects " + std::to_string(weights.size()) +
                      " features, got " + std::to_string(X.cols()));
    }
    return (X * weights).array() + intercept;
  }
};

/// Minimises ||yc - Xc w||^2 + lambda ||w||^2 on column-centred data; the
/// intercept restores the means. Wide problems (D > N) are solved in the dual.
template <typename DerivedX, typename DerivedY>
RidgeModel<typename DerivedX::Scalar> ridge_fit(const Eigen::MatrixBase<DerivedX>& X,
                                                const Eigen::MatrixBase<DerivedY>& y,
                                                typename DerivedX::Scalar lambda) {
  using Scalar = typename DerivedX::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  const Eigen::Index n = X.rows();
  const Eigen::Index d = X.cols();
  if (n < 1) throw DataError("ridge_fit needs at least one row");
  if (y.size() != n) throw DataError("ridge_fit: X and y row counts differ");
  if (!(lambda >= 0) || !std::isfinite(lambda)) throw DataError("ridge lambda must be >= 0");
  if (!X.allFinite() || !y.allFinite()) throw DataError("ridge_fit: non-finite input");

  const Vector x_mean = X.colwise().mean().transpose();
  const Scalar y_mean = y.mean();
  const Matrix Xc = X.rowwise() - x_mean.transpose();
  const Vector yc = y.array() - y_mean;

  RidgeModel<Scalar> m;
  m.lambda = lambda;
  if (lambda == 0) {
    Eigen::ColPivHouseholderQR<Matrix> qr(Xc);
    if (qr.rank() < d) {
      throw NumericalError("singular ridge system at lambda=0 (rank " +
                           std::to_string(qr.rank()) + " < " + std::to_string(d) +
                           "); use lambda > 0");
    }
    m.weights = qr.solve(yc);
  } else if (d <= n) {
    Matrix A = Xc.transpose() * Xc;
    A.diagonal().array() += lambda;
    Eigen::LLT<Matrix> llt(A);
    if (llt.info() != Eigen::Success) throw NumericalError("ridge normal equations not positive definite");
    m.weights = llt.solve(Xc.transpose() * yc);
  } else {
    Matrix G = Xc * Xc.transpose();
    G.diagonal().array() += lambda;
    Eigen::LLT<Matrix> llt(G);
    if (llt.info() != Eigen::Success) throw NumericalError("ridge dual system not positive definite");
    m.weights = Xc.transpose() * llt.solve(yc);
  }
  m.intercept = y_mean - m.weights.dot(x_mean);
  return m;
}

/// Nine log-spaced values 1e-4 ... 1e4.
inline std::vector<double> default_lambda_grid() {
  std::vector<double> grid;
  for (int e = -4; e <= 4; ++e) grid.push_back(std::pow(10.0, e));
  return grid;
}

/// Lambda with the lowest validation MSE; ties go to the smaller lambda.
template <typename DX1, typename DY1, typename DX2, typename DY2>
typename DX1::Scalar ridge_tune(const Eigen::MatrixBase<DX1>& X_train,
                                const Eigen::MatrixBase<DY1>& y_train,
                                const Eigen::MatrixBase<DX2>& X_val,
                                const Eigen::MatrixBase<DY2>& y_val,
                                std::span<const typename DX1::Scalar> grid) {
  using Scalar = typename DX1::Scalar;
  if (grid.empty()) throw DataError("ridge_tune: empty lambda grid");
  if (X_val.rows() < 1 || X_val.rows() != y_val.size()) {
    throw DataError("ridge_tune: validation set is empty or misaligned");
  }
  std::vector<Scalar> sorted(grid.begin(), grid.end());
  std::sort(sorted.begin(), sorted.end());
  Scalar best_lambda = sorted.front();
  Scalar best_mse = std::numeric_limits<Scalar>::infinity();
  for (Scalar lambda : sorted) {
    const auto m = ridge_fit(X_train, y_train, lambda);
    const Scalar mse = (m.predict_rows(X_val) - y_val).squaredNorm() / static_cast<Scalar>(y_val.size());
    if (mse < best_mse) {
      best_mse = mse;
      best_lambda = lambda;
    }
  }
  return best_lambda;
}

}  // namespace persona
