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
#ifndef WVTUNE_CORE_STATS_HPP
#define WVTUNE_CORE_STATS_HPP

#include <cmath>
#include <cstdint>

#include <Eigen/Dense>

#include "wvtune/error.hpp"
#include "wvtune/linalg.hpp"
#include "wvtune/random.hpp"

namespace wvtune {

/// Labels are 0 and 1; class 1 is predicted when the discriminant is positive.
using Label = int;

/// True statistics of a two-class Gaussian mixture.
struct GaussianClassModel {
  Eigen::VectorXd mu0;
  Eigen::VectorXd mu1;
  Eigen::MatrixXd sigma0;
  Eigen::MatrixXd sigma1;
  double pi0 = 0.5;
  double pi1 = 0.5;

  Eigen::Index dim() const { return mu0.size(); }

  /// mu = mu1 - mu0.
  Eigen::VectorXd mean_difference() const { return mu1 - mu0; }

  Eigen::VectorXd midpoint() const { return 0.5 * (mu0 + mu1); }

  const Eigen::VectorXd& mean(Label c) const { return c == 0 ? mu0 : mu1; }
  const Eigen::MatrixXd& covariance(Label c) const { return c == 0 ? sigma0 : sigma1; }
  double prior(Label c) const { return c == 0 ? pi0 : pi1; }

  bool has_common_covariance(double rel_tol = 1e-10) const {
    return approx_symmetric_equal(sigma0, sigma1, rel_tol);
  }

  /// Dimensions and priors only; O(p^2).
  void validate_shape() const {
    const Eigen::Index p = dim();
    if (p == 0) throw ParameterError("model dimension must be positive");
    if (mu1.size() != p || sigma0.rows() != p || sigma0.cols() != p || sigma1.rows() != p ||
        sigma1.cols() != p)
      throw ParameterError("model means and covariances must share dimension p");
    if (!(pi0 > 0.0 && pi0 < 1.0 && pi1 > 0.0 && pi1 < 1.0) || std::abs(pi0 + pi1 - 1.0) > 1e-12)
      throw ParameterError("class priors must lie in (0,1) and sum to 1");
  }

  /// Full check including positive definiteness of both covariances.
  void validate() const {
    validate_shape();
    SpdFactor(sigma0, "sigma0");
    SpdFactor(sigma1, "sigma1");
  }
};

/// Training or testing samples; one column per observation.
struct LabeledDataset {
  Eigen::MatrixXd x0;  // p x n0
  Eigen::MatrixXd x1;  // p x n1

  Eigen::Index dim() const { return x0.rows(); }
  Eigen::Index n0() const { return x0.cols(); }
  Eigen::Index n1() const { return x1.cols(); }
  Eigen::Index size() const { return n0() + n1(); }
  const Eigen::MatrixXd& samples(Label c) const { return c == 0 ? x0 : x1; }

  void validate() const {
    if (x0.rows() != x1.rows() || x0.rows() == 0)
      throw ParameterError("dataset classes must share a positive dimension p");
    if (n0() < 2 || n1() < 2)
      throw ParameterError("each class needs at least two samples (n0, n1 >= 2)");
  }
};

struct SampleStatistics {
  Eigen::VectorXd mu0_hat;
  Eigen::VectorXd mu1_hat;
  Eigen::MatrixXd sigma0_hat;
  Eigen::MatrixXd sigma1_hat;
  Eigen::MatrixXd sigma_pooled;
  Eigen::Index n0 = 0;
  Eigen::Index n1 = 0;
  double pi0_hat = 0.5;
  double pi1_hat = 0.5;

  Eigen::Index dim() const { return mu0_hat.size(); }
  Eigen::Index n() const { return n0 + n1; }

  /// mu_hat = mu1_hat - mu0_hat.
  Eigen::VectorXd mean_difference() const { return mu1_hat - mu0_hat; }

  /// (mu0_hat + mu1_hat) / 2.
  Eigen::VectorXd center() const { return 0.5 * (mu0_hat + mu1_hat); }
};

namespace detail {

inline Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& x, const Eigen::VectorXd& mean) {
  const Eigen::MatrixXd centered = x.colwise() - mean;
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(x.rows(), x.rows());
  cov.selfadjointView<Eigen::Lower>().rankUpdate(centered, 1.0 / double(x.cols() - 1));
  cov.triangularView<Eigen::StrictlyUpper>() = cov.transpose();
  return cov;
}

inline Eigen::MatrixXd draw_class(const Eigen::VectorXd& mean, const Eigen::MatrixXd& chol,
                                  Eigen::Index n, std::uint64_t seed, Label c) {
  Rng rng = make_rng(seed, {static_cast<std::uint64_t>(c)});
  Eigen::MatrixXd x = chol.triangularView<Eigen::Lower>() * standard_normal_matrix(rng, mean.size(), n);
  x.colwise() += mean;
  return x;
}

}  // namespace detail

/// Draws n0 columns from N(mu0, sigma0) and n1 from N(mu1, sigma1) as
/// mu_i + L_i z. Each class uses its own substream of `seed`, so changing n0
/// leaves the class-1 draws untouched.
inline LabeledDataset sample_dataset(const GaussianClassModel& model, Eigen::Index n0,
                                     Eigen::Index n1, std::uint64_t seed) {
  model.validate_shape();
  if (n0 < 2 || n1 < 2) throw ParameterError("sample_dataset: n0 and n1 must be >= 2");
  const Eigen::MatrixXd l0 = SpdFactor(model.sigma0, "sigma0").lower();
  const Eigen::MatrixXd l1 = SpdFactor(model.sigma1, "sigma1").lower();
  return {detail::draw_class(model.mu0, l0, n0, seed, 0),
          detail::draw_class(model.mu1, l1, n1, seed, 1)};
}

inline SampleStatistics compute_sample_statistics(const LabeledDataset& data) {
  data.validate();
  SampleStatistics s;
  s.n0 = data.n0();
  s.n1 = data.n1();
  s.mu0_hat = data.x0.rowwise().mean();
  s.mu1_hat = data.x1.rowwise().mean();
  s.sigma0_hat = detail::sample_covariance(data.x0, s.mu0_hat);
  s.sigma1_hat = detail::sample_covariance(data.x1, s.mu1_hat);
  s.sigma_pooled = (double(s.n0 - 1) * s.sigma0_hat + double(s.n1 - 1) * s.sigma1_hat) /
                   double(s.n0 + s.n1 - 2);
  s.pi0_hat = double(s.n0) / double(s.n());
  s.pi1_hat = double(s.n1) / double(s.n());
  return s;
}

/// Numerical rank of a symmetric PSD matrix (eigenvalues above
/// rel_tol * largest eigenvalue).
inline Eigen::Index symmetric_rank(const Eigen::MatrixXd& a, double rel_tol = 1e-10) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = es.eigenvalues();
  const double top = ev.cwiseAbs().maxCoeff();
  if (top == 0.0) return 0;
  return (ev.array() > rel_tol * top).count();
}

// Synthetic class statistics used throughout the experiments.

/// mu0 = p^{-1/4} [1 (ceil(sqrt p) times), 0 ..., 2, 2]; requires p >= 4.
inline Eigen::VectorXd sparse_mean_shift(Eigen::Index p) {
  const auto ones = static_cast<Eigen::Index>(std::ceil(std::sqrt(double(p))));
  if (p - ones - 2 < 0) throw ParameterError("sparse_mean_shift needs p >= 4");
  Eigen::VectorXd m = Eigen::VectorXd::Zero(p);
  m.head(ones).setOnes();
  m(p - 2) = 2.0;
  m(p - 1) = 2.0;
  return m / std::pow(double(p), 0.25);
}

/// (10/p) 1 1^T + 0.1 I.
inline Eigen::MatrixXd equicorrelated_covariance(Eigen::Index p) {
  return Eigen::MatrixXd::Constant(p, p, 10.0 / double(p)) +
         0.1 * Eigen::MatrixXd::Identity(p, p);
}

/// [Sigma]_ij = r^|i-j|.
inline Eigen::MatrixXd ar1_covariance(Eigen::Index p, double r = 0.9) {
  Eigen::MatrixXd s(p, p);
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = 0; j < p; ++j) s(i, j) = std::pow(r, double(std::abs(i - j)));
  return s;
}

/// Common covariance: sparse mean shift, mu1 = 0, equicorrelated Sigma, equal priors.
inline GaussianClassModel common_covariance_model(Eigen::Index p) {
  const Eigen::MatrixXd s = equicorrelated_covariance(p);
  return {sparse_mean_shift(p), Eigen::VectorXd::Zero(p), s, s, 0.5, 0.5};
}

/// Distinct covariances: sigma0 = AR(1) with 0.9, sigma1 equicorrelated.
inline GaussianClassModel distinct_covariance_model(Eigen::Index p) {
  return {sparse_mean_shift(p), Eigen::VectorXd::Zero(p), ar1_covariance(p, 0.9),
          equicorrelated_covariance(p), 0.5, 0.5};
}

/// Sparse mean shift with Sigma = scale * I.
inline GaussianClassModel isotropic_model(Eigen::Index p, double scale = 1.0) {
  const Eigen::MatrixXd s = scale * Eigen::MatrixXd::Identity(p, p);
  return {sparse_mean_shift(p), Eigen::VectorXd::Zero(p), s, s, 0.5, 0.5};
}

}  // namespace wvtune

#endif  // WVTUNE_CORE_STATS_HPP
