/*
 * Copyright 2026 The wvtune Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef WVTUNE_RMT_HPP
#define WVTUNE_RMT_HPP

// Large-dimensional approximations of the alpha-LDA misclassification
// probability. Deterministic equivalents depend only on the true class
// statistics and the sample sizes; G-estimators depend only on sample
// statistics and need no test data. Both keep n - 2 rather than n in every
// normalization.

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "wvtune/alpha.hpp"
#include "wvtune/core_stats.hpp"
#include "wvtune/error.hpp"
#include "wvtune/exact_error.hpp"
#include "wvtune/linalg.hpp"

namespace wvtune {

struct FixedPointOptions {
  double tol = 1e-10;
  int max_iter = 2000;
};

struct FixedPointSolution {
  double delta_tilde = 0.0;
  double nu_tilde = 0.0;
  int iterations = 0;
  double residual = 0.0;
};

namespace detail {

inline void require_growth_regime(Eigen::Index p, Eigen::Index n0, Eigen::Index n1) {
  if (n0 < 2 || n1 < 2) throw ParameterError("need n0, n1 >= 2");
  if (p >= n0 + n1 - 2)
    throw ParameterError("need p < n - 2 (p=" + std::to_string(p) +
                         ", n=" + std::to_string(n0 + n1) + "); collect more data");
}

/// tr(A B) for symmetric-or-not square A, B without forming the product.
inline double trace_of_product(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a.array() * b.transpose().array()).sum();
}

}  // namespace detail

/// Solves
///   delta = tr(sigma0 M^{-1}) / (n - 2),  nu = tr(sigma1 M^{-1}) / (n - 2),
///   M = c0 / (1 + delta) sigma0 + c1 / (1 + nu) sigma1,  c_i = (n_i - 1) / (n - 2),
/// by fixed-point iteration from delta = nu = 1. The generalized eigenvalues
/// l_k of (sigma0, sigma1) are computed once; each iterate then costs O(p):
/// tr(sigma0 M^{-1}) = sum l_k / (a l_k + b), tr(sigma1 M^{-1}) = sum 1 / (a l_k + b).
inline FixedPointSolution solve_fixed_point(const Eigen::MatrixXd& sigma0,
                                            const Eigen::MatrixXd& sigma1, Eigen::Index n0,
                                            Eigen::Index n1, const FixedPointOptions& opt = {}) {
  const Eigen::Index p = sigma0.rows();
  if (sigma1.rows() != p || sigma0.cols() != p || sigma1.cols() != p)
    throw ParameterError("solve_fixed_point: covariance dimensions differ");
  detail::require_growth_regime(p, n0, n1);
  if (!(opt.tol > 0.0) || opt.max_iter < 1) throw ParameterError("solve_fixed_point: bad options");
  SpdFactor(sigma0, "sigma0");
  SpdFactor(sigma1, "sigma1");

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(sigma0, sigma1,
                                                                 Eigen::EigenvaluesOnly);
  if (ges.info() != Eigen::Success)
    throw NumericalError("solve_fixed_point: generalized eigendecomposition failed");
  const Eigen::ArrayXd l = ges.eigenvalues().array();

  const double m = double(n0 + n1 - 2);
  const double c0 = double(n0 - 1) / m;
  const double c1 = double(n1 - 1) / m;
  double delta = 1.0, nu = 1.0, residual = 0.0;
  for (int it = 1; it <= opt.max_iter; ++it) {
    const Eigen::ArrayXd denom = c0 / (1.0 + delta) * l + c1 / (1.0 + nu);
    const double d_next = (l / denom).sum() / m;
    const double n_next = denom.inverse().sum() / m;
    residual = std::max(std::abs(d_next - delta) / d_next, std::abs(n_next - nu) / n_next);
    delta = d_next;
    nu = n_next;
    if (!std::isfinite(delta) || !std::isfinite(nu))
      throw ConvergenceError("solve_fixed_point: iterate is not finite", residual);
    if (residual <= opt.tol) return {delta, nu, it, residual};
  }
  throw ConvergenceError("solve_fixed_point: no convergence in " + std::to_string(opt.max_iter) +
                             " iterations (relative residual " + std::to_string(residual) + ")",
                         residual);
}

/// Q_bar = (c0 / (1 + delta) sigma0 + c1 / (1 + nu) sigma1)^{-1}.
inline Eigen::MatrixXd fixed_point_resolvent(const Eigen::MatrixXd& sigma0,
                                             const Eigen::MatrixXd& sigma1, Eigen::Index n0,
                                             Eigen::Index n1, double delta, double nu) {
  const double m = double(n0 + n1 - 2);
  const Eigen::MatrixXd mat =
      double(n0 - 1) / m / (1.0 + delta) * sigma0 + double(n1 - 1) / m / (1.0 + nu) * sigma1;
  Eigen::MatrixXd q = SpdFactor(0.5 * (mat + mat.transpose()), "fixed-point matrix").inverse();
  return 0.5 * (q + q.transpose());
}

struct DeterministicEquivalentContext {
  Eigen::MatrixXd q_bar;
  Eigen::Matrix2d omega;
  Eigen::Matrix2d r;
  Eigen::MatrixXd a0, a1;
  Eigen::MatrixXd q_tilde0, q_tilde1;
  double kappa = 0.0;
  double eta = 0.0;  // only meaningful for a common covariance
  double tau = 0.0;
  bool common = false;
};

/// 1 / (1 - p / (n - 2)).
inline double tau_factor(Eigen::Index p, Eigen::Index n) {
  return 1.0 / (1.0 - double(p) / double(n - 2));
}

inline DeterministicEquivalentContext build_de_context(const GaussianClassModel& model,
                                                       Eigen::Index n0, Eigen::Index n1,
                                                       const FixedPointSolution& fp) {
  model.validate_shape();
  const Eigen::Index p = model.dim();
  detail::require_growth_regime(p, n0, n1);
  const double m = double(n0 + n1 - 2);
  const Eigen::MatrixXd& s0 = model.sigma0;
  const Eigen::MatrixXd& s1 = model.sigma1;

  DeterministicEquivalentContext ctx;
  ctx.q_bar = fixed_point_resolvent(s0, s1, n0, n1, fp.delta_tilde, fp.nu_tilde);
  ctx.a0 = s0 * ctx.q_bar;
  ctx.a1 = s1 * ctx.q_bar;

  const Eigen::MatrixXd* a[2] = {&ctx.a0, &ctx.a1};
  const double c[2] = {double(n0 - 1) / m, double(n1 - 1) / m};
  const double shrink[2] = {1.0 / (1.0 + fp.delta_tilde), 1.0 / (1.0 + fp.nu_tilde)};
  for (int row = 0; row < 2; ++row)
    for (int col = 0; col < 2; ++col)
      ctx.omega(row, col) = c[col] * shrink[row] * shrink[row] *
                            detail::trace_of_product(*a[row], *a[col]) / m;

  const Eigen::Vector2cd ev = ctx.omega.eigenvalues();
  const double radius = std::max(std::abs(ev(0)), std::abs(ev(1)));
  if (!(radius < 1.0))
    throw NumericalError("spectral radius of Omega is " + std::to_string(radius) +
                         " (>= 1); (I - Omega)^{-1} is undefined");
  const Eigen::Matrix2d core = (Eigen::Matrix2d::Identity() - ctx.omega).inverse() * ctx.omega;
  const double cnt[2] = {double(n0 - 1), double(n1 - 1)};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) ctx.r(i, j) = cnt[i] / cnt[j] * core(i, j);

  ctx.q_tilde0 = ctx.q_bar * (ctx.a0 + ctx.r(0, 0) * ctx.a0 + ctx.r(1, 0) * ctx.a1);
  ctx.q_tilde1 = ctx.q_bar * (ctx.a1 + ctx.r(0, 1) * ctx.a0 + ctx.r(1, 1) * ctx.a1);

  const Eigen::VectorXd mu = model.mean_difference();
  const double fn0 = double(n0), fn1 = double(n1);
  ctx.kappa = (mu.dot(ctx.q_bar * mu) + ctx.a0.trace() / fn0 + ctx.a1.trace() / fn1) /
              (mu.squaredNorm() + s0.trace() / fn0 + s1.trace() / fn1);
  ctx.tau = tau_factor(p, n0 + n1);
  ctx.common = model.has_common_covariance();
  if (ctx.common) {
    const double mahal = mu.dot(spd_solve(s0, mu, "sigma"));
    ctx.eta = ctx.tau * (mahal + double(p) / fn0 + double(p) / fn1) /
              (mu.squaredNorm() + (1.0 / fn0 + 1.0 / fn1) * s0.trace());
  }
  return ctx;
}

/// Deterministic equivalents of the alpha-LDA moments for one
/// (model, n0, n1), reusable across alpha. With `assume_common` the
/// common-covariance closed forms are used (sigma0 must equal sigma1);
/// otherwise the fixed-point route, which also covers distinct covariances.
class DeterministicEquivalent {
 public:
  DeterministicEquivalent(const GaussianClassModel& model, Eigen::Index n0, Eigen::Index n1,
                          bool assume_common, const FixedPointOptions& opt = {})
      : pi0_(model.pi0), pi1_(model.pi1), common_(assume_common) {
    model.validate();
    const Eigen::Index p = model.dim();
    detail::require_growth_regime(p, n0, n1);
    const Eigen::VectorXd mu = model.mean_difference();
    const double fn0 = double(n0), fn1 = double(n1);
    mu_sq_ = mu.squaredNorm();
    if (mu_sq_ == 0.0) throw ZeroMeanDifferenceError();

    if (assume_common) {
      if (!model.has_common_covariance())
        throw ParameterError("assume_common set but sigma0 != sigma1");
      const Eigen::MatrixXd& s = model.sigma0;
      const double mahal = mu.dot(spd_solve(s, mu, "sigma"));
      const double tr = s.trace();
      const double tau = tau_factor(p, n0 + n1);
      const double eta = tau * (mahal + double(p) / fn0 + double(p) / fn1) /
                         (mu_sq_ + (1.0 / fn0 + 1.0 / fn1) * tr);
      const double inv_n = 1.0 / fn0 + 1.0 / fn1;
      for (int i = 0; i < 2; ++i) {
        const double sign = i == 1 ? 1.0 : -1.0;
        mean_nc_[i] = eta * (0.5 * sign * mu_sq_ + 0.5 * (1.0 / fn0 - 1.0 / fn1) * tr);
        mean_lda_[i] = 0.5 * tau * (sign * mahal + double(p) / fn0 - double(p) / fn1);
        var_nc_[i] = eta * eta * (mu.dot(s * mu) + inv_n * s.squaredNorm());
        var_lda_[i] = tau * tau * tau * (mahal + double(p) / fn0 + double(p) / fn1);
        var_cross_[i] = tau * eta * (mu_sq_ + inv_n * tr);
      }
      return;
    }

    const FixedPointSolution fp = solve_fixed_point(model.sigma0, model.sigma1, n0, n1, opt);
    const DeterministicEquivalentContext ctx = build_de_context(model, n0, n1, fp);
    const Eigen::MatrixXd* sig[2] = {&model.sigma0, &model.sigma1};
    const Eigen::MatrixXd* a[2] = {&ctx.a0, &ctx.a1};
    const Eigen::MatrixXd* qt[2] = {&ctx.q_tilde0, &ctx.q_tilde1};
    const double tr0 = model.sigma0.trace(), tr1 = model.sigma1.trace();
    const double mqm = mu.dot(ctx.q_bar * mu);
    const double ta0 = ctx.a0.trace(), ta1 = ctx.a1.trace();
    for (int i = 0; i < 2; ++i) {
      const double sign = i == 1 ? 1.0 : -1.0;
      const Eigen::MatrixXd& si = *sig[i];
      mean_nc_[i] = ctx.kappa * (0.5 * sign * mu_sq_ + 0.5 * (tr0 / fn0 - tr1 / fn1));
      mean_lda_[i] = 0.5 * sign * mqm + 0.5 * (ta0 / fn0 - ta1 / fn1);
      var_nc_[i] = ctx.kappa * ctx.kappa *
                   (mu.dot(si * mu) + detail::trace_of_product(model.sigma0, si) / fn0 +
                    detail::trace_of_product(model.sigma1, si) / fn1);
      var_cross_[i] = ctx.kappa * (mu.dot(*a[i] * mu) + detail::trace_of_product(si, ctx.a0) / fn0 +
                                   detail::trace_of_product(si, ctx.a1) / fn1);
      var_lda_[i] = mu.dot(*qt[i] * mu) + detail::trace_of_product(model.sigma0, *qt[i]) / fn0 +
                    detail::trace_of_product(model.sigma1, *qt[i]) / fn1;
    }
    fixed_point_ = fp;
  }

  MomentQuadruple moments(double alpha) const {
    const double b = 1.0 - alpha;
    double mean[2], var[2];
    for (int i = 0; i < 2; ++i) {
      mean[i] = b * mean_nc_[i] + alpha * mean_lda_[i];
      var[i] = b * b * var_nc_[i] + 2.0 * alpha * b * var_cross_[i] + alpha * alpha * var_lda_[i];
    }
    return {mean[0], mean[1], var[0], var[1], MomentFlavor::deterministic_equivalent};
  }

  double error(double alpha) const { return error_from_moments(moments(alpha), pi0_, pi1_); }

  bool common() const { return common_; }
  const FixedPointSolution& fixed_point() const { return fixed_point_; }

 private:
  double pi0_, pi1_;
  bool common_;
  double mu_sq_ = 0.0;
  // Per class: the alpha-free pieces that (1 - alpha) and alpha multiply.
  double mean_nc_[2] = {}, mean_lda_[2] = {};
  double var_nc_[2] = {}, var_cross_[2] = {}, var_lda_[2] = {};
  FixedPointSolution fixed_point_;
};

struct MisclassificationEstimate {
  MomentQuadruple moments;
  double epsilon = 0.0;
};

inline MisclassificationEstimate de_misclassification(const GaussianClassModel& model,
                                                      Eigen::Index n0, Eigen::Index n1,
                                                      double alpha, bool assume_common) {
  const DeterministicEquivalent de(model, n0, n1, assume_common);
  const MomentQuadruple m = de.moments(alpha);
  return {m, error_from_moments(m, model.pi0, model.pi1)};
}

struct GEstimatorContext {
  double rho = 0.0;
  double lambda0 = 0.0;
  double lambda1 = 0.0;
  double tau_hat = 0.0;
};

namespace detail {

inline double trace_correction(double trace_ratio, Eigen::Index n) {
  const double u = trace_ratio / double(n - 2);
  if (!(1.0 - u > 0.0))
    throw NumericalError("trace correction undefined; p too close to n (tr/(n-2) = " +
                         std::to_string(u) + ")");
  return u / (1.0 - u);
}

}  // namespace detail

/// G-estimators of the alpha-LDA moments from sample statistics alone.
/// With `assume_common` the common-covariance corrections (tau) are used;
/// otherwise the per-class trace corrections lambda_i.
class GEstimator {
 public:
  GEstimator(const SampleStatistics& stats, bool assume_common)
      : pi0_(stats.pi0_hat), pi1_(stats.pi1_hat), common_(assume_common) {
    const Eigen::Index p = stats.dim();
    detail::require_growth_regime(p, stats.n0, stats.n1);
    const Eigen::VectorXd mu = stats.mean_difference();
    const double mu_sq = mu.squaredNorm();
    if (mu_sq == 0.0) throw ZeroMeanDifferenceError();
    const SpdFactor pooled(stats.sigma_pooled, "pooled sample covariance");
    const Eigen::VectorXd sinv_mu = pooled.solve(mu);
    const double mahal = mu.dot(sinv_mu);
    ctx_.rho = mahal / mu_sq;
    ctx_.tau_hat = tau_factor(p, stats.n());
    const double rho = ctx_.rho;
    const double fn[2] = {double(stats.n0), double(stats.n1)};

    if (assume_common) {
      const double tr = stats.sigma_pooled.trace();
      const double tau = ctx_.tau_hat;
      for (int i = 0; i < 2; ++i) {
        const double sign = i == 1 ? 1.0 : -1.0;
        // Both parts share 0.5 rho mu^T mu = 0.5 mahal as the leading term.
        mean_nc_[i] = sign * (0.5 * rho * mu_sq - rho * tr / fn[i]);
        mean_lda_[i] = sign * (0.5 * mahal - double(p) / fn[i] * tau);
        var_nc_[i] = rho * rho * mu.dot(stats.sigma_pooled * mu);
        var_cross_[i] = rho * tau * mu_sq;
        var_lda_[i] = tau * tau * mahal;
      }
      return;
    }

    const Eigen::MatrixXd sinv = pooled.inverse();
    const Eigen::MatrixXd* si[2] = {&stats.sigma0_hat, &stats.sigma1_hat};
    double lambda[2];
    for (int i = 0; i < 2; ++i) {
      lambda[i] = detail::trace_correction(detail::trace_of_product(*si[i], sinv), stats.n());
      const double sign = i == 1 ? 1.0 : -1.0;
      const Eigen::VectorXd si_mu = *si[i] * mu;
      const double g = 1.0 + lambda[i];
      mean_nc_[i] = sign * rho * (0.5 * mu_sq - si[i]->trace() / fn[i]);
      mean_lda_[i] = sign * (0.5 * mahal - double(stats.n() - 2) / fn[i] * lambda[i]);
      var_nc_[i] = rho * rho * mu.dot(si_mu);
      var_cross_[i] = rho * g * si_mu.dot(sinv_mu);
      var_lda_[i] = g * g * sinv_mu.dot(*si[i] * sinv_mu);
    }
    ctx_.lambda0 = lambda[0];
    ctx_.lambda1 = lambda[1];
  }

  MomentQuadruple moments(double alpha) const {
    const double b = 1.0 - alpha;
    double mean[2], var[2];
    for (int i = 0; i < 2; ++i) {
      mean[i] = b * mean_nc_[i] + alpha * mean_lda_[i];
      var[i] = b * b * var_nc_[i] + 2.0 * alpha * b * var_cross_[i] + alpha * alpha * var_lda_[i];
    }
    return {mean[0], mean[1], var[0], var[1], MomentFlavor::g_estimate};
  }

  double error(double alpha) const { return error_from_moments(moments(alpha), pi0_, pi1_); }

  const GEstimatorContext& context() const { return ctx_; }
  bool common() const { return common_; }

 private:
  double pi0_, pi1_;
  bool common_;
  GEstimatorContext ctx_;
  double mean_nc_[2] = {}, mean_lda_[2] = {};
  double var_nc_[2] = {}, var_cross_[2] = {}, var_lda_[2] = {};
};

inline MisclassificationEstimate ge_misclassification(const SampleStatistics& stats, double alpha,
                                                      bool assume_common) {
  const GEstimator ge(stats, assume_common);
  const MomentQuadruple m = ge.moments(alpha);
  return {m, error_from_moments(m, stats.pi0_hat, stats.pi1_hat)};
}

/// Picks alpha on the grid by minimizing the G-estimated error; same tie rule
/// as grid_search_alpha.
inline AlphaSearchResult tune_alpha_via_ge(const SampleStatistics& stats,
                                           const std::vector<double>& grid, bool assume_common) {
  const GEstimator ge(stats, assume_common);
  return sweep_alpha(grid, [&](double a) { return ge.error(a); });
}

}  // namespace wvtune

#endif  // WVTUNE_RMT_HPP
