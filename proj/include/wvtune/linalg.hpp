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
#ifndef WVTUNE_LINALG_HPP
#define WVTUNE_LINALG_HPP

#include <algorithm>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "wvtune/error.hpp"

namespace wvtune {

/// Relative pivot below which a symmetric matrix is treated as singular.
inline constexpr double kSingularPivotTolerance = 1e-12;

/// Cholesky factor A = L L^T of a symmetric positive definite matrix.
///
/// Construction fails with NotPositiveDefiniteError when any squared pivot
/// L(i,i)^2 is at most kSingularPivotTolerance times the largest diagonal
/// entry of A. The role string names the matrix in error messages
/// ("pooled sample covariance", "sigma0", ...).
class SpdFactor {
 public:
  SpdFactor() = default;

  explicit SpdFactor(const Eigen::MatrixXd& a, std::string_view role = "matrix") {
    if (a.rows() != a.cols() || a.rows() == 0)
      throw ParameterError(std::string(role) + " must be a non-empty square matrix");
    const double scale = a.cwiseAbs().maxCoeff();
    if (!a.allFinite()) throw ParameterError(std::string(role) + " has non-finite entries");
    if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(scale, 1e-300))
      throw ParameterError(std::string(role) + " is not symmetric");

    llt_.compute(a);
    if (llt_.info() != Eigen::Success) throw NotPositiveDefiniteError(std::string(role));
    const double max_diag = a.diagonal().maxCoeff();
    const Eigen::VectorXd pivots = llt_.matrixLLT().diagonal().array().square();
    if (!(max_diag > 0.0) || pivots.minCoeff() <= kSingularPivotTolerance * max_diag)
      throw NotPositiveDefiniteError(std::string(role));
  }

  Eigen::Index size() const { return llt_.rows(); }

  template <typename Derived>
  typename Derived::PlainObject solve(const Eigen::MatrixBase<Derived>& b) const {
    if (b.rows() != size()) throw ParameterError("spd_solve: dimension mismatch");
    return llt_.solve(b);
  }

  /// Lower-triangular L with L L^T = A.
  Eigen::MatrixXd lower() const { return llt_.matrixL(); }

  Eigen::MatrixXd inverse() const {
    return llt_.solve(Eigen::MatrixXd::Identity(size(), size()));
  }

 private:
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

/// Solves a x = b for symmetric positive definite a.
template <typename Derived>
typename Derived::PlainObject spd_solve(const Eigen::MatrixXd& a,
                                        const Eigen::MatrixBase<Derived>& b,
                                        std::string_view role = "matrix") {
  return SpdFactor(a, role).solve(b);
}

inline bool approx_symmetric_equal(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                   double rel_tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  const double scale = std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
  return (a - b).cwiseAbs().maxCoeff() <= rel_tol * std::max(scale, 1e-300);
}

}  // namespace wvtune

#endif  // WVTUNE_LINALG_HPP
