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
#ifndef WVTUNE_CLASSIFIERS_HPP
#define WVTUNE_CLASSIFIERS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wvtune/core_stats.hpp"
#include "wvtune/discriminant.hpp"
#include "wvtune/error.hpp"
#include "wvtune/linalg.hpp"
#include "wvtune/random.hpp"

namespace wvtune {

namespace detail {

inline double log_prior_ratio(const SampleStatistics& s) {
  return std::log(s.pi1_hat / s.pi0_hat);
}

inline LinearDiscriminant with_prior_bias(Eigen::VectorXd w, const SampleStatistics& s) {
  const double w0 = midpoint_bias(w, s.mu0_hat, s.mu1_hat) + log_prior_ratio(s);
  return {std::move(w), w0, false};
}

}  // namespace detail

/// w = pooled^{-1} mu_hat, bias at the midpoint plus ln(pi1_hat / pi0_hat).
inline LinearDiscriminant fit_lda(const SampleStatistics& s) {
  SpdFactor f;
  try {
    f = SpdFactor(s.sigma_pooled, "pooled sample covariance");
  } catch (const NotPositiveDefiniteError&) {
    throw NotPositiveDefiniteError("pooled sample covariance",
                                   "LDA needs n - 2 > p; use R-LDA or RP-LDA instead");
  }
  return detail::with_prior_bias(f.solve(s.mean_difference()), s);
}

/// w = mu_hat with a midpoint bias. Coincident centroids give the zero
/// discriminant flagged as degenerate.
inline LinearDiscriminant fit_nearest_centroid(const SampleStatistics& s) {
  Eigen::VectorXd w = s.mean_difference();
  const bool degenerate = w.squaredNorm() == 0.0;
  return {w, degenerate ? 0.0 : midpoint_bias(w, s.mu0_hat, s.mu1_hat), degenerate};
}

/// Ridge-regularized LDA: w = (pooled + gamma I)^{-1} mu_hat.
inline LinearDiscriminant fit_rlda(const SampleStatistics& s, double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw ParameterError("fit_rlda: gamma must be positive and finite");
  const Eigen::Index p = s.dim();
  const Eigen::MatrixXd reg = s.sigma_pooled + gamma * Eigen::MatrixXd::Identity(p, p);
  return detail::with_prior_bias(spd_solve(reg, s.mean_difference(), "regularized pooled covariance"),
                                 s);
}

struct RpLdaConfig {
  Eigen::Index d = 1;
  int m = 50;
  std::uint64_t seed = 0;
};

/// R^T (R S R^T)^{-1} R mu for a single d x p projection R.
inline Eigen::VectorXd projected_lda_weight(const Eigen::MatrixXd& r, const Eigen::MatrixXd& sigma,
                                            const Eigen::VectorXd& mu) {
  const Eigen::MatrixXd projected = r * sigma * r.transpose();
  const Eigen::MatrixXd sym = 0.5 * (projected + projected.transpose());
  return r.transpose() * SpdFactor(sym, "projected pooled covariance").solve(r * mu);
}

/// Draws projection i of an ensemble; `attempt` selects the resample stream.
inline Eigen::MatrixXd rplda_projection(const RpLdaConfig& cfg, Eigen::Index p, int i,
                                        int attempt = 0) {
  Rng rng = make_rng(cfg.seed, {static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(attempt)});
  return standard_normal_matrix(rng, cfg.d, p);
}

/// Random-projection LDA ensemble: average of projected_lda_weight over m
/// Gaussian projections. A projection whose projected covariance is singular
/// is redrawn once.
inline LinearDiscriminant fit_rplda(const LabeledDataset& data, const RpLdaConfig& cfg) {
  const SampleStatistics s = compute_sample_statistics(data);
  if (cfg.m < 1) throw ParameterError("fit_rplda: ensemble size m must be >= 1");
  const Eigen::Index budget = symmetric_rank(s.sigma_pooled) - 2;
  if (cfg.d < 1 || cfg.d > budget)
    throw ParameterError("fit_rplda: d must lie in [1, rank(pooled) - 2] = [1, " +
                         std::to_string(budget) + "]");
  const Eigen::Index p = s.dim();
  const Eigen::VectorXd mu = s.mean_difference();
  Eigen::VectorXd w = Eigen::VectorXd::Zero(p);
  for (int i = 0; i < cfg.m; ++i) {
    try {
      w += projected_lda_weight(rplda_projection(cfg, p, i, 0), s.sigma_pooled, mu);
    } catch (const NotPositiveDefiniteError&) {
      w += projected_lda_weight(rplda_projection(cfg, p, i, 1), s.sigma_pooled, mu);
    }
  }
  return detail::with_prior_bias(w / double(cfg.m), s);
}

/// Raised when IRLS stops without a maximum likelihood estimate.
class LogisticFitError : public ConvergenceError {
 public:
  LogisticFitError(const std::string& what, double last_step, LinearDiscriminant last)
      : ConvergenceError(what, last_step), last_iterate_(std::move(last)) {}

  const LinearDiscriminant& last_iterate() const noexcept { return last_iterate_; }

 private:
  LinearDiscriminant last_iterate_;
};

namespace detail {

struct StackedData {
  Eigen::MatrixXd x;  // p x n, class 0 first
  Eigen::VectorXd y;  // 0/1 labels
};

inline StackedData stack(const LabeledDataset& data) {
  if (data.x0.rows() != data.x1.rows() || data.dim() == 0 || data.n0() < 1 || data.n1() < 1)
    throw ParameterError("need samples of both classes with a shared positive dimension");
  StackedData out{Eigen::MatrixXd(data.dim(), data.size()), Eigen::VectorXd(data.size())};
  out.x << data.x0, data.x1;
  out.y.head(data.n0()).setZero();
  out.y.tail(data.n1()).setOnes();
  return out;
}

inline double sigmoid(double t) {
  return t >= 0.0 ? 1.0 / (1.0 + std::exp(-t)) : std::exp(t) / (1.0 + std::exp(t));
}

}  // namespace detail

/// Binomial maximum likelihood by iteratively reweighted least squares
/// (Newton steps with a 1e-8 I Hessian jitter). Converged when the largest
/// coefficient change is at most tol. Separable data has no finite MLE and
/// is reported as soon as an iterate separates every training point.
inline LinearDiscriminant fit_logistic(const LabeledDataset& data, int max_iter = 100,
                                       double tol = 1e-10) {
  if (max_iter < 1 || !(tol > 0.0)) throw ParameterError("fit_logistic: bad max_iter or tol");
  const auto [x, y] = detail::stack(data);
  const Eigen::Index p = x.rows();
  const Eigen::Index n = x.cols();
  Eigen::MatrixXd design(n, p + 1);
  design.leftCols(p) = x.transpose();
  design.col(p).setOnes();

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p + 1);
  auto as_disc = [&](const Eigen::VectorXd& b) {
    return LinearDiscriminant{b.head(p), b(p), false};
  };
  double step_norm = std::numeric_limits<double>::infinity();
  for (int it = 0; it < max_iter; ++it) {
    const Eigen::VectorXd eta = design * beta;
    Eigen::VectorXd prob(n), weight(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      prob(i) = detail::sigmoid(eta(i));
      weight(i) = prob(i) * (1.0 - prob(i));
    }
    Eigen::MatrixXd hessian = design.transpose() * weight.asDiagonal() * design;
    hessian.diagonal().array() += 1e-8;
    const Eigen::VectorXd step = hessian.ldlt().solve(design.transpose() * (y - prob));
    beta += step;
    step_norm = step.cwiseAbs().maxCoeff();
    if (!beta.allFinite())
      throw LogisticFitError("fit_logistic: iterate diverged", step_norm, as_disc(beta - step));
    if (step_norm <= tol) return as_disc(beta);

    const Eigen::VectorXd next = design * beta;
    bool separates = true;
    for (Eigen::Index i = 0; i < n && separates; ++i)
      separates = y(i) == 1.0 ? next(i) > 0.0 : next(i) < 0.0;
    if (separates)
      throw LogisticFitError(
          "fit_logistic: training data are linearly separable; the likelihood has no maximizer",
          step_norm, as_disc(beta));
  }
  throw LogisticFitError("fit_logistic: no convergence within max_iter", step_norm, as_disc(beta));
}

struct SvmDiagnostics {
  double kkt_violation = 0.0;
  double duality_gap = 0.0;
  long iterations = 0;
};

namespace detail {

inline double svm_duality_gap(const Eigen::MatrixXd& x, const Eigen::VectorXd& ys,
                              const Eigen::VectorXd& alpha, const Eigen::VectorXd& w, double b,
                              double c) {
  double hinge = 0.0;
  for (Eigen::Index i = 0; i < x.cols(); ++i)
    hinge += std::max(0.0, 1.0 - ys(i) * (w.dot(x.col(i)) + b));
  const double primal = 0.5 * w.squaredNorm() + c * hinge;
  const double dual = alpha.sum() - 0.5 * w.squaredNorm();
  return primal - dual;
}

}  // namespace detail

/// Soft-margin linear SVM, minimizing (1/2)|w|^2 + penalty * sum of hinge
/// losses, via SMO on the dual: each step updates the maximal violating
/// pair of multipliers. Stops when the KKT violation is at most tol.
inline LinearDiscriminant fit_linear_svm(const LabeledDataset& data, double penalty,
                                         double tol = 1e-6, long max_iter = 10'000'000,
                                         SvmDiagnostics* diag = nullptr) {
  if (!(penalty > 0.0) || !std::isfinite(penalty))
    throw ParameterError("fit_linear_svm: penalty must be positive and finite");
  if (!(tol > 0.0) || max_iter < 1) throw ParameterError("fit_linear_svm: bad tol or max_iter");
  const auto [x, y01] = detail::stack(data);
  const Eigen::Index n = x.cols();
  const double c = penalty;
  const Eigen::VectorXd ys = 2.0 * y01.array() - 1.0;
  const Eigen::MatrixXd q = ys.asDiagonal() * (x.transpose() * x) * ys.asDiagonal();
  constexpr double kTau = 1e-12;

  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd grad = -Eigen::VectorXd::Ones(n);
  auto in_up = [&](Eigen::Index t) { return ys(t) > 0 ? alpha(t) < c : alpha(t) > 0.0; };
  auto in_low = [&](Eigen::Index t) { return ys(t) > 0 ? alpha(t) > 0.0 : alpha(t) < c; };

  long it = 0;
  double violation = 0.0;
  for (;; ++it) {
    double gmax = -std::numeric_limits<double>::infinity();
    double gmax2 = -std::numeric_limits<double>::infinity();
    Eigen::Index i = -1, j = -1;
    for (Eigen::Index t = 0; t < n; ++t) {
      const double v = -ys(t) * grad(t);
      if (in_up(t) && v > gmax) gmax = v, i = t;
      if (in_low(t) && -v > gmax2) gmax2 = -v, j = t;
    }
    violation = gmax + gmax2;
    if (i < 0 || j < 0 || violation <= tol) break;
    if (it >= max_iter) {
      Eigen::VectorXd w = x * (alpha.array() * ys.array()).matrix();
      throw ConvergenceError(
          "fit_linear_svm: iteration cap reached (KKT violation " + std::to_string(violation) +
              ", duality gap " +
              std::to_string(detail::svm_duality_gap(x, ys, alpha, w, 0.0, c)) + ")",
          violation);
    }

    const double ai = alpha(i), aj = alpha(j);
    if (ys(i) != ys(j)) {
      double quad = q(i, i) + q(j, j) + 2.0 * q(i, j);
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad(i) - grad(j)) / quad;
      const double diff = alpha(i) - alpha(j);
      alpha(i) += delta;
      alpha(j) += delta;
      if (diff > 0.0) {
        if (alpha(j) < 0.0) alpha(j) = 0.0, alpha(i) = diff;
      } else if (alpha(i) < 0.0) {
        alpha(i) = 0.0, alpha(j) = -diff;
      }
      if (diff > 0.0) {
        if (alpha(i) > c) alpha(i) = c, alpha(j) = c - diff;
      } else if (alpha(j) > c) {
        alpha(j) = c, alpha(i) = c + diff;
      }
    } else {
      double quad = q(i, i) + q(j, j) - 2.0 * q(i, j);
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad(i) - grad(j)) / quad;
      const double sum = alpha(i) + alpha(j);
      alpha(i) -= delta;
      alpha(j) += delta;
      if (sum > c) {
        if (alpha(i) > c) alpha(i) = c, alpha(j) = sum - c;
      } else if (alpha(j) < 0.0) {
        alpha(j) = 0.0, alpha(i) = sum;
      }
      if (sum > c) {
        if (alpha(j) > c) alpha(j) = c, alpha(i) = sum - c;
      } else if (alpha(i) < 0.0) {
        alpha(i) = 0.0, alpha(j) = sum;
      }
    }
    grad += q.col(i) * (alpha(i) - ai) + q.col(j) * (alpha(j) - aj);
  }

  // Bias: average over free multipliers, else midpoint of the feasible interval.
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double free_sum = 0.0;
  long free_count = 0;
  for (Eigen::Index t = 0; t < n; ++t) {
    const double yg = ys(t) * grad(t);
    if (alpha(t) >= c) {
      if (ys(t) < 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else if (alpha(t) <= 0.0) {
      if (ys(t) > 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else {
      free_sum += yg;
      ++free_count;
    }
  }
  const double rho = free_count > 0 ? free_sum / double(free_count) : 0.5 * (ub + lb);
  LinearDiscriminant disc{x * (alpha.array() * ys.array()).matrix(), -rho, false};
  if (diag) {
    diag->kkt_violation = violation;
    diag->duality_gap = detail::svm_duality_gap(x, ys, alpha, disc.w, disc.w0, c);
    diag->iterations = it;
  }
  return disc;
}

}  // namespace wvtune

#endif  // WVTUNE_CLASSIFIERS_HPP
