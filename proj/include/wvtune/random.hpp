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
#ifndef WVTUNE_RANDOM_HPP
#define WVTUNE_RANDOM_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

#include <Eigen/Dense>

namespace wvtune {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives an independent substream seed from a root seed and a path of
/// stream indices, e.g. derive_seed(seed, {rep, class}).
inline std::uint64_t derive_seed(std::uint64_t seed,
                                 std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = splitmix64(seed);
  for (std::uint64_t k : path) s = splitmix64(s ^ splitmix64(k + 0x632be59bd9b4e019ULL));
  return s;
}

inline Rng make_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> path = {}) {
  return Rng(derive_seed(seed, path));
}

/// rows x cols matrix of i.i.d. N(0,1), filled column by column.
inline Eigen::MatrixXd standard_normal_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd z(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) z(i, j) = normal(rng);
  return z;
}

/// Uniform draw from the unit sphere in R^p (normalized Gaussian).
inline Eigen::VectorXd random_unit_vector(Rng& rng, Eigen::Index p) {
  Eigen::VectorXd v = standard_normal_matrix(rng, p, 1).col(0);
  double norm = v.norm();
  while (norm == 0.0) {
    v = standard_normal_matrix(rng, p, 1).col(0);
    norm = v.norm();
  }
  return v / norm;
}

}  // namespace wvtune

#endif  // WVTUNE_RANDOM_HPP
