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
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "persona/error.hpp"
#include "persona/rng.hpp"

namespace persona {

/// RBF + white-noise hyperparameters, stored as logs. A length-scale vector of
/// size 1 is isotropic; size D enables ARD. A noise log of -inf means
/// sigma_n^2 = 0 and is only usable with jitter.
template <typename Scalar>
struct KernelParams {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Scalar log_signal_variance = 0;
  Vector log_length_scale = Vector::Zero(1);
  Scalar log_noise_variance = std::log(Scalar(0.1));

  static KernelParams isotropic(Scalar signal_variance, Scalar length_scale, Scalar noise_variance) {
    KernelParams p;
    p.log_signal_variance = std::log(signal_variance);
    p.log_length_scale = Vector::Constant(1, std::log(length_scale));
    p.log_noise_variance = std::log(noise_variance);
    p.validate();
    return p;
  }

  static KernelParams ard(Scalar signal_variance, const Vector& length_scales, Scalar noise_variance) {
    KernelParams p;
    p.log_signal_variance = std::log(signal_variance);
    p.log_length_scale = length_scales.array().log();
    p.log_noise_variance = std::log(noise_variance);
    p.validate();
    return p;
  }

  Scalar signal_variance() const { return std::exp(log_signal_variance); }
  Scalar noise_variance() const { return std::exp(log_noise_variance); }
  Vector length_scale() const { return log_length_scale.array().exp(); }
  bool is_ard() const { return log_length_scale.size() > 1; }

  /// Number of optimised log-parameters: [log sf2, log l..., log sn2].
  Eigen::Index size() const { return log_length_scale.size() + 2; }

  Vector to_vector() const {
    Vector v(size());
    v[0] = log_signal_variance;
    v.segment(1, log_length_scale.size()) = log_length_scale;
    v[size() - 1] = log_noise_variance;
    return v;
  }

  static KernelParams from_vector(const Vector& v) {
    KernelParams p;
    p.log_signal_variance = v[0];
    p.log_length_scale = v.segment(1, v.size() - 2);
    p.log_noise_variance = v[v.size() - 1];
    return p;
  }

  void validate() const {
    if (!std::isfinite(log_signal_variance) || log_length_scale.size() < 1 ||
        !log_length_scale.allFinite()) {
      throw DataError("kernel signal variance and length-scales must be positive and finite");
    }
    if (std::isnan(log_noise_variance) || log_noise_variance == std::numeric_limits<Scalar>::infinity()) {
      throw DataError("kernel noise variance must be >= 0 and finite");
    }
  }

  void check_dimension(Eigen::Index dim) const {
    if (is_ard() && log_length_scale.size() != dim) {
      throw DataError("ARD kernel has " + std::to_string(log_length_scale.size()) +
                      " length-scales for " + std::to_string(dim) + " features");
    }
  }

  friend bool operator==(const KernelParams& a, const KernelParams& b) {
    return a.log_signal_variance == b.log_signal_variance &&
           a.log_length_scale == b.log_length_scale &&
           a.log_noise_variance == b.log_noise_variance;
  }
};

/// sf2 * exp(-|x1 - x2|^2 / (2 l^2)), per-coordinate l in ARD mode.
template <typename D1, typename D2, typename Scalar = typename D1::Scalar>
Scalar rbf_kernel(const Eigen::MatrixBase<D1>& x1, const Eigen::MatrixBase<D2>& x2,
                  const KernelParams<Scalar>& p) {
  if (x1.size() != x2.size()) {
    throw DataError("rbf_kernel: dimension mismatch (" + std::to_string(x1.size()) + " vs " +
                    std::to_string(x2.size()) + ")");
  }
  p.check_dimension(x1.size());
  Scalar r2;
  if (p.is_ard()) {
    r2 = ((x1 - x2).array() / p.length_scale().array()).square().sum();
  } else {
    const Scalar ell = std::exp(p.log_length_scale[0]);
    r2 = (x1 - x2).squaredNorm() / (ell * ell);
  }
  return p.signal_variance() * std::exp(Scalar(-0.5) * r2);
}

namespace gp_detail {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Rows divided by the length-scale(s): the kernel only sees scaled inputs.
template <typename Scalar>
Matrix<Scalar> scale_rows(const Eigen::Ref<const Matrix<Scalar>>& X, const KernelParams<Scalar>& p) {
  p.check_dimension(X.cols());
  if (p.is_ard()) {
    return X.array().rowwise() / p.length_scale().transpose().array();
  }
  return X / std::exp(p.log_length_scale[0]);
}

/// Pairwise squared distances between rows, computed by explicit differences.
template <typename Scalar>
Matrix<Scalar> squared_distances(const Eigen::Ref<const Matrix<Scalar>>& A,
                                 const Eigen::Ref<const Matrix<Scalar>>& B) {
  Matrix<Scalar> D2(A.rows(), B.rows());
  for (Eigen::Index j = 0; j < B.rows(); ++j) {
    for (Eigen::Index i = 0; i < A.rows(); ++i) D2(i, j) = (A.row(i) - B.row(j)).squaredNorm();
  }
  return D2;
}

template <typename Scalar>
Matrix<Scalar> squared_distances(const Eigen::Ref<const Matrix<Scalar>>& A) {
  const Eigen::Index n = A.rows();
  Matrix<Scalar> D2(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    D2(j, j) = 0;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      D2(i, j) = (A.row(i) - A.row(j)).squaredNorm();
      D2(j, i) = D2(i, j);
    }
  }
  return D2;
}

template <typename Scalar>
struct Factor {
  Matrix<Scalar> L;
  Scalar jitter = 0;
};

/// Cholesky of K + sn2*I, escalating diagonal jitter 1e-8..1e-2 times
/// mean(diag K) when the factor is missing or numerically singular.
template <typename Scalar>
std::optional<Factor<Scalar>> try_cholesky(const Matrix<Scalar>& K, Scalar noise_variance, bool allow_jitter,
                                           Scalar* last_jitter = nullptr) {
  const Eigen::Index n = K.rows();
  const Scalar mean_diag = K.diagonal().mean();
  const Scalar floor = static_cast<Scalar>(n) * std::numeric_limits<Scalar>::epsilon() * mean_diag;
  std::vector<Scalar> ladder = {Scalar(0)};
  if (allow_jitter) {
    for (Scalar rel = Scalar(1e-8); rel <= Scalar(1.5e-2); rel *= Scalar(10)) ladder.push_back(rel * mean_diag);
  }
  for (Scalar jitter : ladder) {
    Matrix<Scalar> A = K;
    A.diagonal().array() += noise_variance + jitter;
    if (last_jitter) *last_jitter = jitter;
    Eigen::LLT<Matrix<Scalar>> llt(A);
    if (llt.info() != Eigen::Success) continue;
    Matrix<Scalar> L = llt.matrixL();
    const Scalar min_pivot = L.diagonal().array().square().minCoeff();
    if (!(min_pivot > floor) || !L.allFinite()) continue;
    return Factor<Scalar>{std::move(L), jitter};
  }
  return std::nullopt;
}

template <typename Scalar>
Factor<Scalar> cholesky(const Matrix<Scalar>& K, Scalar noise_variance, bool allow_jitter) {
  Scalar last = 0;
  auto f = try_cholesky(K, noise_variance, allow_jitter, &last);
  if (!f) {
    throw NumericalError("Cholesky failed (final jitter " + std::to_string(last) +
                         (allow_jitter ? ")" : ", jitter disabled)"));
  }
  return std::move(*f);
}

template <typename Scalar>
struct TargetScaling {
  Scalar mean = 0;
  Scalar std = 1;
};

template <typename Scalar>
TargetScaling<Scalar> target_scaling(const Eigen::Ref<const Vector<Scalar>>& y) {
  TargetScaling<Scalar> t;
  t.mean = y.mean();
  const Scalar var = (y.array() - t.mean).square().mean();
  t.std = var > 0 ? std::sqrt(var) : Scalar(1);
  return t;
}

}  // namespace gp_detail

struct GpOptions {
  bool jitter = true;
};

/// Exact GP posterior on standardized targets.
template <typename Scalar>
struct GpModel {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  KernelParams<Scalar> params;
  Matrix inputs;        ///< N x D training inputs
  Scalar target_mean = 0;
  Scalar target_std = 1;
  Matrix chol;          ///< lower factor of K + (sn2 + jitter) I
  Vector alpha;         ///< (K + (sn2 + jitter) I)^-1 y_standardized
  Scalar jitter = 0;

  Eigen::Index dimension() const { return inputs.cols(); }
  Eigen::Index size() const { return inputs.rows(); }
};

template <typename Scalar>
struct GpPrediction {
  Scalar mean;
  Scalar variance;
};

/// Fits the posterior at fixed hyperparameters.
template <typename DerivedX, typename DerivedY, typename Scalar = typename DerivedX::Scalar>
GpModel<Scalar> gp_fit(const Eigen::MatrixBase<DerivedX>& X, const Eigen::MatrixBase<DerivedY>& y,
                       const KernelParams<Scalar>& p, const GpOptions& opts = {}) {
  using namespace gp_detail;
  if (X.rows() < 1) throw DataError("gp_fit needs at least one training point");
  if (y.size() != X.rows()) throw DataError("gp_fit: X and y row counts differ");
  if (!X.allFinite() || !y.allFinite()) throw DataError("gp_fit: non-finite input");
  p.validate();
  if (p.log_noise_variance == -std::numeric_limits<Scalar>::infinity() && !opts.jitter) {
    throw DataError("zero noise variance requires jitter");
  }

  GpModel<Scalar> m;
  m.params = p;
  m.inputs = X;
  const Vector<Scalar> yv = y;
  const auto ts = target_scaling<Scalar>(yv);
  m.target_mean = ts.mean;
  m.target_std = ts.std;
  const Vector<Scalar> ys = (yv.array() - ts.mean) / ts.std;

  const Matrix<Scalar> S = scale_rows<Scalar>(m.inputs, p);
  const Matrix<Scalar> K = p.signal_variance() * (Scalar(-0.5) * squared_distances<Scalar>(S).array()).exp();
  auto f = cholesky<Scalar>(K, p.noise_variance(), opts.jitter);
  m.jitter = f.jitter;
  m.chol = std::move(f.L);
  m.alpha = m.chol.template triangularView<Eigen::Lower>().solve(ys);
  m.chol.template triangularView<Eigen::Lower>().transpose().solveInPlace(m.alpha);
  if (!m.alpha.allFinite()) throw NumericalError("gp_fit: non-finite dual weights");
  return m;
}

/// Rebuilds a fitted model from persisted parts, refactoring K with the
/// recorded jitter. Bitwise identical to the original fit on the same platform.
template <typename Scalar>
GpModel<Scalar> gp_restore(const KernelParams<Scalar>& p, Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> inputs,
                           Scalar target_mean, Scalar target_std, Eigen::Matrix<Scalar, Eigen::Dynamic, 1> alpha,
                           Scalar jitter) {
  using namespace gp_detail;
  p.validate();
  if (alpha.size() != inputs.rows()) throw DataError("GP restore: alpha length does not match inputs");
  GpModel<Scalar> m;
  m.params = p;
  m.inputs = std::move(inputs);
  m.target_mean = target_mean;
  m.target_std = target_std;
  m.alpha = std::move(alpha);
  m.jitter = jitter;
  const Matrix<Scalar> S = scale_rows<Scalar>(m.inputs, p);
  Matrix<Scalar> A = p.signal_variance() * (Scalar(-0.5) * squared_distances<Scalar>(S).array()).exp();
  A.diagonal().array() += p.noise_variance() + jitter;
  Eigen::LLT<Matrix<Scalar>> llt(A);
  if (llt.info() != Eigen::Success) throw NumericalError("GP restore: Cholesky failed");
  m.chol = llt.matrixL();
  return m;
}

/// Latent posterior mean and variance, de-standardized.
template <typename Derived, typename Scalar = typename Derived::Scalar>
GpPrediction<Scalar> gp_predict(const GpModel<Scalar>& m, const Eigen::MatrixBase<Derived>& x) {
  using namespace gp_detail;
  if (x.size() != m.dimension()) {
    throw DataError("gp_predict: expected " + std::to_string(m.dimension()) + " features, got " +
                    std::to_string(x.size()));
  }
  const Matrix<Scalar> xs = scale_rows<Scalar>(Matrix<Scalar>(x.transpose()), m.params);
  const Matrix<Scalar> S = scale_rows<Scalar>(m.inputs, m.params);
  const Scalar sf2 = m.params.signal_variance();
  const Vector<Scalar> kstar = sf2 * (Scalar(-0.5) * squared_distances<Scalar>(S, xs).array()).exp();
  const Scalar mean_s = kstar.dot(m.alpha);
  const Vector<Scalar> v = m.chol.template triangularView<Eigen::Lower>().solve(kstar);
  const Scalar var_s = std::max(Scalar(0), sf2 - v.squaredNorm());
  return {mean_s * m.target_std + m.target_mean, var_s * m.target_std * m.target_std};
}

/// Posterior means for every row of Xq (no variances).
template <typename Derived, typename Scalar = typename Derived::Scalar>
gp_detail::Vector<Scalar> gp_predict_mean(const GpModel<Scalar>& m, const Eigen::MatrixBase<Derived>& Xq) {
  using namespace gp_detail;
  if (Xq.cols() != m.dimension()) {
    throw DataError("gp_predict: expected " + std::to_string(m.dimension()) + " features, got " +
                    std::to_string(Xq.cols()));
  }
  const Matrix<Scalar> Q = scale_rows<Scalar>(Matrix<Scalar>(Xq), m.params);
  const Matrix<Scalar> S = scale_rows<Scalar>(m.inputs, m.params);
  const Matrix<Scalar> Kq =
      m.params.signal_variance() * (Scalar(-0.5) * squared_distances<Scalar>(Q, S).array()).exp();
  return (Kq * m.alpha).array() * m.target_std + m.target_mean;
}

template <typename Scalar>
struct LmlResult {
  Scalar value;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> gradient;  ///< w.r.t. KernelParams::to_vector()
  Scalar jitter;
};

namespace gp_detail {

/// LML and gradient on already standardized targets. `D2` holds unscaled
/// pairwise squared distances (isotropic mode only; may be empty for ARD).
/// With `with_gradient` false the gradient is left empty.
template <typename Scalar>
std::optional<LmlResult<Scalar>> lml_standardized(const KernelParams<Scalar>& p,
                                                  const Eigen::Ref<const Matrix<Scalar>>& X,
                                                  const Eigen::Ref<const Vector<Scalar>>& ys,
                                                  const Matrix<Scalar>& D2, bool allow_jitter,
                                                  bool with_gradient = true) {
  const Eigen::Index n = X.rows();
  const Scalar sf2 = p.signal_variance();
  const Scalar sn2 = p.noise_variance();
  Matrix<Scalar> R2;  // squared distances in length-scale units
  if (p.is_ard()) {
    R2 = squared_distances<Scalar>(scale_rows<Scalar>(X, p));
  } else {
    const Scalar ell2 = std::exp(Scalar(2) * p.log_length_scale[0]);
    R2 = D2.size() ? Matrix<Scalar>(D2 / ell2) : squared_distances<Scalar>(scale_rows<Scalar>(X, p));
  }
  const Matrix<Scalar> K = sf2 * (Scalar(-0.5) * R2.array()).exp();
  auto f = try_cholesky<Scalar>(K, sn2, allow_jitter);
  if (!f) return std::nullopt;
  const auto L = f->L.template triangularView<Eigen::Lower>();
  Vector<Scalar> alpha = L.solve(ys);
  f->L.transpose().template triangularView<Eigen::Upper>().solveInPlace(alpha);

  LmlResult<Scalar> r;
  r.jitter = f->jitter;
  r.value = Scalar(-0.5) * ys.dot(alpha) - f->L.diagonal().array().log().sum() -
            Scalar(0.5) * static_cast<Scalar>(n) * std::log(Scalar(2) * std::numbers::pi_v<Scalar>);
  if (!with_gradient) {
    if (!std::isfinite(r.value)) return std::nullopt;
    return r;
  }

  // dLML/dtheta = 0.5 tr((alpha alpha^T - A^-1) dA/dtheta)
  Matrix<Scalar> Ainv = Matrix<Scalar>::Identity(n, n);
  L.solveInPlace(Ainv);
  f->L.transpose().template triangularView<Eigen::Upper>().solveInPlace(Ainv);
  const Matrix<Scalar> Q = alpha * alpha.transpose() - Ainv;

  r.gradient.resize(p.size());
  r.gradient[0] = Scalar(0.5) * (Q.array() * K.array()).sum();
  if (p.is_ard()) {
    const auto ell = p.length_scale();
    for (Eigen::Index d = 0; d < X.cols(); ++d) {
      const Vector<Scalar> xd = X.col(d) / ell[d];
      Scalar g = 0;
      for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
          const Scalar diff = xd[i] - xd[j];
          g += Q(i, j) * K(i, j) * diff * diff;
        }
      }
      r.gradient[1 + d] = Scalar(0.5) * g;
    }
  } else {
    r.gradient[1] = Scalar(0.5) * (Q.array() * K.array() * R2.array()).sum();
  }
  r.gradient[p.size() - 1] = Scalar(0.5) * sn2 * Q.trace();
  if (!std::isfinite(r.value) || !r.gradient.allFinite()) return std::nullopt;
  return r;
}

}  // namespace gp_detail

/// Log marginal likelihood of standardized targets and its gradient over the
/// log-parameters.
template <typename DerivedX, typename DerivedY, typename Scalar = typename DerivedX::Scalar>
LmlResult<Scalar> gp_log_marginal_likelihood(const KernelParams<Scalar>& p, const Eigen::MatrixBase<DerivedX>& X,
                                             const Eigen::MatrixBase<DerivedY>& y, const GpOptions& opts = {}) {
  using namespace gp_detail;
  if (X.rows() < 1) throw DataError("log marginal likelihood needs at least one point");
  if (y.size() != X.rows()) throw DataError("log marginal likelihood: X and y row counts differ");
  p.validate();
  p.check_dimension(X.cols());
  const Matrix<Scalar> Xm = X;
  const Vector<Scalar> yv = y;
  const auto ts = target_scaling<Scalar>(yv);
  const Vector<Scalar> ys = (yv.array() - ts.mean) / ts.std;
  auto r = lml_standardized<Scalar>(p, Xm, ys, Matrix<Scalar>(), opts.jitter);
  if (!r) throw NumericalError("log marginal likelihood: Cholesky failed or result not finite");
  return *r;
}

enum class AscentDirection {
  gradient,  ///< steepest ascent
  lbfgs      ///< limited-memory quasi-Newton direction
};

struct OptimizeOptions {
  int restarts = 3;
  std::uint64_t seed = 0;
  int max_iterations = 200;
  double gradient_tolerance = 1e-5;
  bool ard = false;
  AscentDirection direction = AscentDirection::lbfgs;
  GpOptions gp;
};

/// Projected ascent on the LML over log-parameters inside a box, from
/// `restarts` deterministic starts; returns the best end point.
template <typename DerivedX, typename DerivedY, typename Scalar = typename DerivedX::Scalar>
KernelParams<Scalar> gp_optimize_hyperparams(const Eigen::MatrixBase<DerivedX>& X,
                                             const Eigen::MatrixBase<DerivedY>& y,
                                             const OptimizeOptions& opts = {}) {
  using namespace gp_detail;
  using Vec = Vector<Scalar>;
  if (opts.restarts < 1) throw DataError("gp_optimize_hyperparams needs restarts >= 1");
  if (X.rows() < 1 || y.size() != X.rows()) throw DataError("gp_optimize_hyperparams: bad inputs");
  if (!X.allFinite() || !y.allFinite()) throw DataError("gp_optimize_hyperparams: non-finite input");

  const Matrix<Scalar> Xm = X;
  const Vec yv = y;
  const auto ts = target_scaling<Scalar>(yv);
  const Vec ys = (yv.array() - ts.mean) / ts.std;
  const Eigen::Index n = Xm.rows();
  const Eigen::Index dim = Xm.cols();
  const Matrix<Scalar> D2 = opts.ard ? Matrix<Scalar>() : squared_distances<Scalar>(Xm);

  // Median pairwise distance (subsampled beyond 400 rows).
  Rng rng(derive_seed({opts.seed, 0x6bULL}));
  std::vector<Eigen::Index> rows(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) rows[static_cast<std::size_t>(i)] = i;
  if (n > 400) {
    for (std::size_t i = 0; i < 400; ++i) std::swap(rows[i], rows[i + rng.below(rows.size() - i)]);
    rows.resize(400);
  }
  std::vector<Scalar> dists;
  for (std::size_t a = 0; a < rows.size(); ++a) {
    for (std::size_t b = a + 1; b < rows.size(); ++b) {
      dists.push_back((Xm.row(rows[a]) - Xm.row(rows[b])).norm());
    }
  }
  Scalar base = 1;
  if (!dists.empty()) {
    auto mid = dists.begin() + static_cast<std::ptrdiff_t>(dists.size() / 2);
    std::nth_element(dists.begin(), mid, dists.end());
    if (*mid > 0) base = *mid;
  }

  const Eigen::Index n_len = opts.ard ? dim : 1;
  const Eigen::Index n_par = n_len + 2;
  Vec lo(n_par), hi(n_par);
  lo[0] = std::log(Scalar(1e-4));
  hi[0] = std::log(Scalar(1e4));
  lo.segment(1, n_len).setConstant(std::log(Scalar(1e-3) * base));
  hi.segment(1, n_len).setConstant(std::log(Scalar(1e3) * base));
  lo[n_par - 1] = std::log(Scalar(1e-6));
  hi[n_par - 1] = std::log(Scalar(1e2));

  auto evaluate = [&](const Vec& theta, bool with_gradient = true) {
    return lml_standardized<Scalar>(KernelParams<Scalar>::from_vector(theta), Xm, ys, D2, opts.gp.jitter,
                                    with_gradient);
  };
  auto projected = [&](const Vec& theta, const Vec& g) {
    Vec pg = g;
    for (Eigen::Index i = 0; i < n_par; ++i) {
      if ((theta[i] <= lo[i] && g[i] < 0) || (theta[i] >= hi[i] && g[i] > 0)) pg[i] = 0;
    }
    return pg;
  };

  std::optional<Vec> best_theta;
  Scalar best_value = -std::numeric_limits<Scalar>::infinity();
  static constexpr Scalar kMultipliers[] = {Scalar(0.5), Scalar(1), Scalar(2)};
  for (int restart = 0; restart < opts.restarts; ++restart) {
    const Scalar mult = restart < 3 ? kMultipliers[restart]
                                    : std::exp(static_cast<Scalar>(rng.uniform(std::log(0.25), std::log(4.0))));
    Vec theta(n_par);
    theta[0] = 0;
    theta.segment(1, n_len).setConstant(std::log(mult * base));
    theta[n_par - 1] = std::log(Scalar(0.1));
    theta = theta.cwiseMax(lo).cwiseMin(hi);
    auto cur = evaluate(theta);
    if (!cur) continue;

    std::deque<std::pair<Vec, Vec>> memory;  // (s, y) pairs for L-BFGS
    Scalar step = 1;
    for (int it = 0; it < opts.max_iterations; ++it) {
      const Vec pg = projected(theta, cur->gradient);
      if (pg.template lpNorm<Eigen::Infinity>() < opts.gradient_tolerance) break;

      Vec dir = pg;
      if (opts.direction == AscentDirection::lbfgs && !memory.empty()) {
        // Two-loop recursion for the ascent problem (minimise -LML).
        Vec q = -pg;
        std::vector<Scalar> a(memory.size());
        for (std::size_t k = memory.size(); k-- > 0;) {
          const auto& [s, yk] = memory[k];
          a[k] = s.dot(q) / yk.dot(s);
          q -= a[k] * yk;
        }
        const auto& [s_last, y_last] = memory.back();
        q *= s_last.dot(y_last) / y_last.squaredNorm();
        for (std::size_t k = 0; k < memory.size(); ++k) {
          const auto& [s, yk] = memory[k];
          const Scalar b = yk.dot(q) / yk.dot(s);
          q += (a[k] - b) * s;
        }
        dir = -q;
        for (Eigen::Index i = 0; i < n_par; ++i) {
          if (pg[i] == 0) dir[i] = 0;
        }
        if (!(dir.dot(pg) > 0)) {
          dir = pg;
          memory.clear();
        }
      }
      Scalar t = (opts.direction == AscentDirection::lbfgs && !memory.empty()) ? Scalar(1) : step;
      bool accepted = false;
      for (int halving = 0; halving < 50; ++halving, t *= Scalar(0.5)) {
        const Vec trial = (theta + t * dir).cwiseMax(lo).cwiseMin(hi);
        const Vec delta = trial - theta;
        if (delta.template lpNorm<Eigen::Infinity>() == 0) break;
        // Trial points only need the value; the gradient is computed once accepted.
        auto next = evaluate(trial, false);
        if (!next) continue;
        if (next->value >= cur->value + Scalar(1e-4) * cur->gradient.dot(delta)) {
          next = evaluate(trial);
          if (!next) continue;
          // L-BFGS pair in minimisation convention: s = delta, y = -(g_new - g_old).
          const Vec yk = -(next->gradient - cur->gradient);
          if (yk.dot(delta) > Scalar(1e-12) * delta.squaredNorm()) {
            memory.emplace_back(delta, yk);
            if (memory.size() > 6) memory.pop_front();
          }
          theta = trial;
          cur = std::move(next);
          accepted = true;
          break;
        }
      }
      if (!accepted) break;
      step = std::min(t * Scalar(2), Scalar(1e3));
    }
    if (cur->value > best_value) {
      best_value = cur->value;
      best_theta = theta;
    }
  }
  if (!best_theta) throw NumericalError("hyperparameter optimisation failed for every restart");
  return KernelParams<Scalar>::from_vector(*best_theta);
}

}  // namespace persona
