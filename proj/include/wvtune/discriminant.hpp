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
#ifndef WVTUNE_DISCRIMINANT_HPP
#define WVTUNE_DISCRIMINANT_HPP

#include <Eigen/Dense>

#include "wvtune/core_stats.hpp"
#include "wvtune/error.hpp"

namespace wvtune {

/// The rule x -> 1{w^T x + w0 > 0}.
struct LinearDiscriminant {
  Eigen::VectorXd w;
  double w0 = 0.0;
  bool degenerate = false;  // w was forced to zero (constant classifier)

  Eigen::Index dim() const { return w.size(); }

  double score(const Eigen::VectorXd& x) const {
    if (x.size() != w.size()) throw ParameterError("discriminant: dimension mismatch");
    return w.dot(x) + w0;
  }

  LinearDiscriminant negated() const { return {-w, -w0, degenerate}; }

  LinearDiscriminant scaled(double c) const { return {c * w, c * w0, degenerate}; }
};

/// Ties (score exactly 0) go to class 0.
inline Label classify(const LinearDiscriminant& disc, const Eigen::VectorXd& x) {
  return disc.score(x) > 0.0 ? 1 : 0;
}

/// Bias placing the boundary halfway between the two centers.
inline double midpoint_bias(const Eigen::VectorXd& w, const Eigen::VectorXd& mu0,
                            const Eigen::VectorXd& mu1) {
  return -0.5 * w.dot(mu0 + mu1);
}

}  // namespace wvtune

#endif  // WVTUNE_DISCRIMINANT_HPP
