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
#ifndef WVTUNE_ALPHA_HPP
#define WVTUNE_ALPHA_HPP

// Splitting a weight vector into its component along the class-mean
// difference and the orthogonal remainder, and rescaling the remainder by a
// scalar alpha.

#include <cmath>
#include <exception>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "wvtune/core_stats.hpp"
#include "wvtune/discriminant.hpp"
#include "wvtune/error.hpp"

namespace wvtune {

/// w^T x_tilde = i1 + n1 + second_term, where x_tilde is the test point
/// shifted by the midpoint of the true means.
struct DecompositionTerms {
  double i1 = 0.0;           // information carried along mu
  double n1 = 0.0;           // noise along mu
  double second_term = 0.0;  // w^T P_mu x_tilde

  double total() const { return i1 + n1 + second_term; }
};

namespace detail {

/// P_mu v = v - mu (mu^T v / mu^T mu).
inline Eigen::VectorXd project_out(const Eigen::VectorXd& mu, const Eigen::VectorXd& v) {
  return v - (mu.dot(v) / mu.squaredNorm()) * mu;
}

inline void require_nonzero(const Eigen::VectorXd& mu) {
  if (mu.squaredNorm() == 0.0) throw ZeroMeanDifferenceError();
}

inline void require_common(const GaussianClassModel& model) {
  model.validate_shape();
  if (!model.has_common_covariance(1e-10))
    throw ParameterError("alpha_mmse requires sigma0 == sigma1 (common covariance)");
}

}  // namespace detail

inline DecompositionTerms decompose_known_means(const Eigen::VectorXd& w,
                                                const GaussianClassModel& model,
                                                const Eigen::VectorXd& x, Label true_class) {
  model.validate_shape();
  if (w.size() != model.dim() || x.size() != model.dim())
    throw ParameterError("decompose_known_means: dimension mismatch");
  const Eigen::VectorXd mu = model.mean_difference();
  detail::require_nonzero(mu);
  const double s = true_class == 1 ? 1.0 : -1.0;
  const Eigen::VectorXd xt = x - model.midpoint();
  const double rho = w.dot(mu) / mu.squaredNorm();
  DecompositionTerms t;
  t.i1 = 0.5 * s * w.dot(mu);
  t.n1 = rho * mu.dot(xt - 0.5 * s * mu);
  t.second_term = w.dot(detail::project_out(mu, xt));
  return t;
}

/// Scalar on the orthogonal part of w minimizing the mean-square noise
/// E[(N1 + alpha N2)^2] under known means and a common covariance.
inline double alpha_mmse(const Eigen::VectorXd& w, const GaussianClassModel& model) {
  detail::require_common(model);
  if (w.size() != model.dim()) throw ParameterError("alpha_mmse: dimension mismatch");
  const Eigen::VectorXd mu = model.mean_difference();
  detail::require_nonzero(mu);
  const Eigen::MatrixXd& sigma = model.sigma0;
  const Eigen::VectorXd pw = detail::project_out(mu, w);
  const Eigen::VectorXd sigma_pw = sigma * pw;
  const double denom = pw.dot(sigma_pw);
  if (!(denom > 1e-14 * sigma.norm() * w.squaredNorm()))
    throw NumericalError("alpha_mmse: w lies in the mu direction; alpha is irrelevant");
  return -(w.dot(mu) / mu.squaredNorm()) * mu.dot(sigma_pw) / denom;
}

/// w' = (w^T mu / mu^T mu) mu + alpha_mmse(w) P_mu w with the midpoint bias
/// of the true means.
inline LinearDiscriminant modified_discriminant_known_means(const Eigen::VectorXd& w,
                                                            const GaussianClassModel& model) {
  const double a = alpha_mmse(w, model);
  const Eigen::VectorXd mu = model.mean_difference();
  Eigen::VectorXd wp = (w.dot(mu) / mu.squaredNorm()) * mu + a * detail::project_out(mu, w);
  const double w0 = midpoint_bias(wp, model.mu0, model.mu1);
  return {std::move(wp), w0, false};
}

struct AlphaDiscriminant {
  Eigen::VectorXd base_w;
  double alpha = 1.0;
  Eigen::VectorXd mu_hat_diff;
  Eigen::VectorXd center;
  LinearDiscriminant realized;

  bool degenerate() const { return realized.degenerate; }
};

/// The orthogonal split of one weight vector against mu_hat, computed once
/// and reused for every alpha of a sweep.
class AlphaParameterization {
 public:
  AlphaParameterization(const Eigen::VectorXd& w, const SampleStatistics& stats)
      : base_w_(w), mu_hat_(stats.mean_difference()), center_(stats.center()) {
    if (w.size() != mu_hat_.size()) throw ParameterError("parameterize: dimension mismatch");
    if (mu_hat_.squaredNorm() == 0.0) throw ZeroMeanDifferenceError();
    aligned_ = (w.dot(mu_hat_) / mu_hat_.squaredNorm()) * mu_hat_;
    orthogonal_ = w - aligned_;
  }

  const Eigen::VectorXd& base_w() const { return base_w_; }
  const Eigen::VectorXd& aligned() const { return aligned_; }
  const Eigen::VectorXd& orthogonal() const { return orthogonal_; }

  AlphaDiscriminant at(double alpha) const {
    // alpha == 1 hands back w itself rather than aligned + orthogonal.
    Eigen::VectorXd w = alpha == 1.0 ? base_w_ : Eigen::VectorXd(aligned_ + alpha * orthogonal_);
    bool degenerate = false;
    if (w.norm() <= 1e-12 * base_w_.norm()) {
      w.setZero();
      degenerate = true;
    }
    const double w0 = -w.dot(center_);
    return {base_w_, alpha, mu_hat_, center_, LinearDiscriminant{std::move(w), w0, degenerate}};
  }

 private:
  Eigen::VectorXd base_w_;
  Eigen::VectorXd mu_hat_;
  Eigen::VectorXd center_;
  Eigen::VectorXd aligned_;
  Eigen::VectorXd orthogonal_;
};

inline AlphaDiscriminant parameterize(const Eigen::VectorXd& w, const SampleStatistics& stats,
                                      double alpha) {
  return AlphaParameterization(w, stats).at(alpha);
}

struct AlphaGridSpec {
  double min = -0.5;
  double max = 2.0;
  double step = 0.005;
};

/// min + k step for k = 0, 1, ... up to max, each rounded to 12 decimals so
/// that grid values print and compare cleanly.
inline std::vector<double> make_alpha_grid(const AlphaGridSpec& spec = {}) {
  if (!std::isfinite(spec.min) || !std::isfinite(spec.max) || !(spec.step > 0.0))
    throw ParameterError("alpha grid: need finite bounds and a positive step");
  if (spec.max < spec.min) throw ParameterError("alpha grid: max < min");
  const auto count = static_cast<long>(std::floor((spec.max - spec.min) / spec.step + 1e-9)) + 1;
  if (count > 10'000'000) throw ParameterError("alpha grid: too many points");
  std::vector<double> grid;
  grid.reserve(count);
  for (long k = 0; k < count; ++k)
    grid.push_back(std::round((spec.min + double(k) * spec.step) * 1e12) / 1e12);
  return grid;
}

struct AlphaPoint {
  double alpha;
  double error;
};

struct AlphaSearchResult {
  double alpha_star = 1.0;
  double error_star = 0.0;
  std::vector<AlphaPoint> curve;
};

/// Index of the minimum error. Exact ties prefer the alpha nearest 1, then
/// the smaller alpha.
inline std::size_t select_best(const std::vector<AlphaPoint>& curve) {
  if (curve.empty()) throw ParameterError("select_best: empty curve");
  std::size_t best = 0;
  for (std::size_t k = 1; k < curve.size(); ++k) {
    const AlphaPoint& a = curve[k];
    const AlphaPoint& b = curve[best];
    if (a.error < b.error) {
      best = k;
    } else if (a.error == b.error) {
      const double da = std::abs(a.alpha - 1.0), db = std::abs(b.alpha - 1.0);
      if (da < db || (da == db && a.alpha < b.alpha)) best = k;
    }
  }
  return best;
}

namespace detail {

inline std::string current_exception_message() {
  try {
    throw;
  } catch (const std::exception& e) {
    return e.what();
  } catch (...) {
    return "unknown exception";
  }
}

}  // namespace detail

/// Evaluates `objective` at every alpha of the grid. Failures surface as
/// ObjectiveError (carrying alpha) with the original exception nested.
template <typename Objective>
AlphaSearchResult sweep_alpha(const std::vector<double>& grid, Objective&& objective) {
  if (grid.empty()) throw ParameterError("alpha grid is empty");
  AlphaSearchResult r;
  r.curve.reserve(grid.size());
  for (double a : grid) {
    double e;
    try {
      e = objective(a);
    } catch (...) {
      std::throw_with_nested(ObjectiveError(a, detail::current_exception_message()));
    }
    r.curve.push_back({a, e});
  }
  const std::size_t best = select_best(r.curve);
  r.alpha_star = r.curve[best].alpha;
  r.error_star = r.curve[best].error;
  return r;
}

/// Grid search over parameterize(w, stats, alpha); the objective maps an
/// AlphaDiscriminant to an error value.
template <typename Objective>
AlphaSearchResult grid_search_alpha(const Eigen::VectorXd& w, const SampleStatistics& stats,
                                    const std::vector<double>& grid, Objective&& objective) {
  const AlphaParameterization split(w, stats);
  return sweep_alpha(grid, [&](double a) { return objective(split.at(a)); });
}

}  // namespace wvtune

#endif  // WVTUNE_ALPHA_HPP
