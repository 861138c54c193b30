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
#ifndef WVTUNE_EXACT_ERROR_HPP
#define WVTUNE_EXACT_ERROR_HPP

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "wvtune/alpha.hpp"
#include "wvtune/core_stats.hpp"
#include "wvtune/discriminant.hpp"
#include "wvtune/error.hpp"
#include "wvtune/linalg.hpp"

namespace wvtune {

/// Standard normal CDF through erfc, accurate in both tails.
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

enum class MomentFlavor { exact, deterministic_equivalent, g_estimate };

inline const char* to_string(MomentFlavor f) {
  switch (f) {
    case MomentFlavor::exact: return "exact";
    case MomentFlavor::deterministic_equivalent: return "deterministic-equivalent";
    case MomentFlavor::g_estimate: return "g-estimate";
  }
  return "?";
}

/// Class-conditional mean and variance of the discriminant value.
struct MomentQuadruple {
  double m0 = 0.0;
  double m1 = 0.0;
  double s0_sq = 1.0;
  double s1_sq = 1.0;
  MomentFlavor flavor = MomentFlavor::exact;
};

/// pi0 Phi(m0 / s0) + pi1 Phi(-m1 / s1).
inline double error_from_moments(const MomentQuadruple& m, double pi0, double pi1) {
  if (!(m.s0_sq > 0.0) || !(m.s1_sq > 0.0) || !std::isfinite(m.s0_sq) || !std::isfinite(m.s1_sq))
    throw NumericalError(std::string("non-positive discriminant variance (") + to_string(m.flavor) +
                         " moments)");
  return pi0 * normal_cdf(m.m0 / std::sqrt(m.s0_sq)) + pi1 * normal_cdf(-m.m1 / std::sqrt(m.s1_sq));
}

/// Error of the constant rule 1{w0 > 0}: it always answers 1 when w0 > 0
/// and 0 otherwise.
inline double constant_classifier_error(double w0, double pi0, double pi1) {
  return w0 > 0.0 ? pi0 : pi1;
}

/// Exact moments of w^T x + w0 under each Gaussian class.
inline MomentQuadruple discriminant_moments(const LinearDiscriminant& disc,
                                            const GaussianClassModel& model) {
  model.validate_shape();
  if (disc.w.size() != model.dim()) throw ParameterError("discriminant/model dimension mismatch");
  if (disc.degenerate || disc.w.squaredNorm() == 0.0) throw ConstantClassifierError();
  return {disc.w.dot(model.mu0) + disc.w0, disc.w.dot(model.mu1) + disc.w0,
          disc.w.dot(model.sigma0 * disc.w), disc.w.dot(model.sigma1 * disc.w),
          MomentFlavor::exact};
}

/// Expected test error of a linear rule under the Gaussian mixture `model`.
/// A zero weight vector raises ConstantClassifierError.
inline double expected_error_exact(const LinearDiscriminant& disc, const GaussianClassModel& model) {
  return error_from_moments(discriminant_moments(disc, model), model.pi0, model.pi1);
}

/// Same, with the constant rule scored by constant_classifier_error.
inline double expected_error_or_constant(const LinearDiscriminant& disc,
                                         const GaussianClassModel& model) {
  if (disc.degenerate || disc.w.squaredNorm() == 0.0)
    return constant_classifier_error(disc.w0, model.pi0, model.pi1);
  return expected_error_exact(disc, model);
}

/// Moments of the alpha-LDA discriminant v^T (x - center) with
/// v = (1 - alpha) rho mu_hat + alpha pooled^{-1} mu_hat and
/// rho = mu_hat^T pooled^{-1} mu_hat / mu_hat^T mu_hat, taken directly from
/// the sample statistics.
inline MomentQuadruple conditional_moments_exact(const AlphaDiscriminant& alpha_disc,
                                                 const SampleStatistics& stats,
                                                 const GaussianClassModel& model) {
  model.validate_shape();
  if (stats.dim() != model.dim()) throw ParameterError("stats/model dimension mismatch");
  const Eigen::VectorXd mu_hat = stats.mean_difference();
  if (mu_hat.squaredNorm() == 0.0) throw ZeroMeanDifferenceError();
  const Eigen::VectorXd sinv_mu = spd_solve(stats.sigma_pooled, mu_hat, "pooled sample covariance");
  const double rho = mu_hat.dot(sinv_mu) / mu_hat.squaredNorm();
  const double a = alpha_disc.alpha;
  const Eigen::VectorXd v = (1.0 - a) * rho * mu_hat + a * sinv_mu;
  const Eigen::VectorXd c = stats.center();
  return {v.dot(model.mu0 - c), v.dot(model.mu1 - c), v.dot(model.sigma0 * v),
          v.dot(model.sigma1 * v), MomentFlavor::exact};
}

/// Fraction of misclassified columns.
inline double empirical_error(const LinearDiscriminant& disc, const LabeledDataset& data) {
  if (data.size() == 0) throw ParameterError("empirical_error: empty dataset");
  if (data.dim() != disc.dim()) throw ParameterError("empirical_error: dimension mismatch");
  long wrong = 0;
  if (data.n0() > 0)
    wrong += ((disc.w.transpose() * data.x0).array() + disc.w0 > 0.0).count();
  if (data.n1() > 0)
    wrong += ((disc.w.transpose() * data.x1).array() + disc.w0 <= 0.0).count();
  return double(wrong) / double(data.size());
}

}  // namespace wvtune

#endif  // WVTUNE_EXACT_ERROR_HPP
