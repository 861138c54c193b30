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
#ifndef WVTUNE_EXPERIMENT_HPP
#define WVTUNE_EXPERIMENT_HPP

// Experiment drivers behind the command-line tool. Each scenario returns a
// Table: a '#' comment block (version, scenario, seed, config hash, derived
// per-replication seeds, summary values) followed by CSV rows.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wvtune/alpha.hpp"
#include "wvtune/classifiers.hpp"
#include "wvtune/config.hpp"
#include "wvtune/core_stats.hpp"
#include "wvtune/csv.hpp"
#include "wvtune/exact_error.hpp"
#include "wvtune/random.hpp"
#include "wvtune/rmt.hpp"

namespace wvtune {

inline std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

struct Table {
  std::vector<std::string> comments;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void note(const std::string& key, const std::string& value) {
    comments.push_back(key + ": " + value);
  }
  void note(const std::string& key, double value) { note(key, format_real(value)); }

  std::string render() const {
    std::ostringstream out;
    for (const auto& c : comments) out << "# " << c << '\n';
    for (std::size_t k = 0; k < header.size(); ++k) out << (k ? "," : "") << header[k];
    out << '\n';
    for (const auto& row : rows) {
      for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << row[k];
      out << '\n';
    }
    return out.str();
  }
};

/// Seed of replication `rep` under root seed `seed`.
inline std::uint64_t replication_seed(std::uint64_t seed, long rep) {
  return derive_seed(seed, {static_cast<std::uint64_t>(rep)});
}

inline GaussianClassModel make_model(const ExperimentConfig& cfg, Eigen::Index p) {
  GaussianClassModel m = cfg.model == "distinct"    ? distinct_covariance_model(p)
                         : cfg.model == "isotropic" ? isotropic_model(p, cfg.isotropic_scale)
                                                    : common_covariance_model(p);
  m.pi0 = cfg.pi0;
  m.pi1 = 1.0 - cfg.pi0;
  return m;
}

namespace detail {

inline Table start_table(const ExperimentConfig& cfg) {
  Table t;
  t.note("wvtune", kVersion);
  t.note("scenario", to_string(cfg.scenario));
  t.note("seed", std::to_string(cfg.seed));
  t.note("config_hash", cfg.hash());
  return t;
}

inline void note_rep_seeds(Table& t, const ExperimentConfig& cfg) {
  std::string s;
  for (long r = 0; r < cfg.reps; ++r)
    s += (r ? " " : "") + std::to_string(replication_seed(cfg.seed, r));
  t.note("rep_seeds", s);
}

inline LinearDiscriminant fit_with(const ExperimentConfig& cfg, const LabeledDataset& data,
                                   const SampleStatistics& stats, double hyper,
                                   std::uint64_t seed) {
  const std::string& c = cfg.classifier;
  if (c == "lda") return fit_lda(stats);
  if (c == "nc") return fit_nearest_centroid(stats);
  if (c == "rlda") return fit_rlda(stats, hyper);
  if (c == "rplda")
    return fit_rplda(data, RpLdaConfig{static_cast<Eigen::Index>(hyper), int(cfg.rp_m), seed});
  if (c == "logistic") return fit_logistic(data, int(cfg.logistic_max_iter));
  if (c == "svm") return fit_linear_svm(data, hyper, cfg.svm_tol);
  throw ParameterError("unknown classifier '" + c + "'");
}

/// Candidate values of the classifier's own hyperparameter: the configured
/// value, or the tuning grid when tune_native is set.
inline std::vector<double> native_grid(const ExperimentConfig& cfg, const SampleStatistics& stats) {
  const std::string& c = cfg.classifier;
  if (c == "rlda") {
    if (!cfg.tune_native) return {cfg.gamma};
    std::vector<double> g;
    for (int k = 0; k <= 19; ++k) g.push_back(1e-4 + 0.1 * k);  // [1e-4, 2]
    return g;
  }
  if (c == "svm") {
    if (!cfg.tune_native) return {cfg.svm_penalty};
    return {1e-4, 1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0, 1000.0};
  }
  if (c == "rplda") {
    const long budget = long(symmetric_rank(stats.sigma_pooled)) - 2;
    if (!cfg.tune_native) return {double(cfg.rp_d > 0 ? cfg.rp_d : budget)};
    std::vector<double> g;
    for (long d = 2; d <= budget; d += 2) g.push_back(double(d));
    return g;
  }
  return {0.0};
}

}  // namespace detail

/// Fits the configured base classifier. With tune_native and a known model
/// the classifier's own hyperparameter is chosen by exact error.
inline LinearDiscriminant fit_base_classifier(const ExperimentConfig& cfg,
                                              const LabeledDataset& data,
                                              const SampleStatistics& stats,
                                              const GaussianClassModel* model,
                                              std::uint64_t seed) {
  const std::vector<double> grid = detail::native_grid(cfg, stats);
  if (grid.size() == 1 || model == nullptr)
    return detail::fit_with(cfg, data, stats, grid.front(), seed);
  LinearDiscriminant best;
  double best_err = std::numeric_limits<double>::infinity();
  for (double h : grid) {
    LinearDiscriminant d = detail::fit_with(cfg, data, stats, h, seed);
    const double e = expected_error_or_constant(d, *model);
    if (e < best_err) best_err = e, best = std::move(d);
  }
  return best;
}

/// w' = (w^T mu / mu^T mu) mu + alpha P_mu w with the midpoint bias of the
/// true means.
inline LinearDiscriminant known_means_alpha_discriminant(const Eigen::VectorXd& w,
                                                         const GaussianClassModel& model,
                                                         double alpha) {
  const Eigen::VectorXd mu = model.mean_difference();
  const Eigen::VectorXd aligned = (w.dot(mu) / mu.squaredNorm()) * mu;
  Eigen::VectorXd wp = aligned + alpha * (w - aligned);
  const bool degenerate = wp.norm() <= 1e-12 * w.norm();
  if (degenerate) wp.setZero();
  const double w0 = midpoint_bias(wp, model.mu0, model.mu1);
  return {std::move(wp), w0, degenerate};
}

inline Table run_known_means_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  const GaussianClassModel model = make_model(cfg, cfg.p);
  const Eigen::VectorXd mu = model.mean_difference();
  Rng rng = make_rng(cfg.seed, {0});
  Eigen::VectorXd w = random_unit_vector(rng, cfg.p);
  if ((cfg.w_sign == "positive" && w.dot(mu) < 0.0) ||
      (cfg.w_sign == "negative" && w.dot(mu) > 0.0))
    w = -w;
  const double a_mmse = alpha_mmse(w, model);
  const AlphaSearchResult r = sweep_alpha(make_alpha_grid(cfg.grid), [&](double a) {
    return expected_error_or_constant(known_means_alpha_discriminant(w, model, a), model);
  });
  std::size_t worst = 0;
  for (std::size_t k = 1; k < r.curve.size(); ++k)
    if (r.curve[k].error > r.curve[worst].error) worst = k;

  Table t = detail::start_table(cfg);
  t.note("p", std::to_string(cfg.p));
  t.note("w_dot_mu", w.dot(mu));
  t.note("alpha_mmse", a_mmse);
  t.note("alpha_argmin", r.alpha_star);
  t.note("alpha_argmax", r.curve[worst].alpha);
  t.header = {"alpha", "exact_error", "alpha_mmse"};
  for (const auto& pt : r.curve)
    t.rows.push_back({format_real(pt.alpha), format_real(pt.error), format_real(a_mmse)});
  return t;
}

inline Table run_synthetic_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  const GaussianClassModel model = make_model(cfg, cfg.p);
  const auto [n0, n1] = cfg.class_sizes();
  const std::vector<double> grid = make_alpha_grid(cfg.grid);
  std::vector<double> sum(grid.size(), 0.0), sum_sq(grid.size(), 0.0);
  long used = 0, failed = 0;
  std::string first_failure;

  for (long rep = 0; rep < cfg.reps; ++rep) {
    const std::uint64_t s = replication_seed(cfg.seed, rep);
    std::vector<double> errs;
    try {
      const LabeledDataset data = sample_dataset(model, n0, n1, s);
      const SampleStatistics stats = compute_sample_statistics(data);
      const LinearDiscriminant base = fit_base_classifier(cfg, data, stats, &model, s);
      const AlphaSearchResult r = grid_search_alpha(base.w, stats, grid, [&](const AlphaDiscriminant& d) {
        return expected_error_or_constant(d.realized, model);
      });
      for (const auto& pt : r.curve) errs.push_back(pt.error);
    } catch (const Error& e) {
      ++failed;
      if (first_failure.empty()) first_failure = "rep " + std::to_string(rep) + ": " + e.what();
      continue;
    }
    ++used;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      sum[k] += errs[k];
      sum_sq[k] += errs[k] * errs[k];
    }
  }

  Table t = detail::start_table(cfg);
  detail::note_rep_seeds(t, cfg);
  t.note("classifier", cfg.classifier);
  t.note("p", std::to_string(cfg.p));
  t.note("n0", std::to_string(n0));
  t.note("n1", std::to_string(n1));
  t.note("reps_used", std::to_string(used));
  t.note("reps_failed", std::to_string(failed));
  if (!first_failure.empty()) t.note("first_failure", first_failure);
  t.header = {"alpha", "mean_error", "std_error", "reps_used", "reps_failed"};
  if (used == 0) return t;

  std::vector<AlphaPoint> curve;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double mean = sum[k] / double(used);
    const double var = used > 1 ? std::max(0.0, (sum_sq[k] - double(used) * mean * mean) / double(used - 1)) : 0.0;
    curve.push_back({grid[k], mean});
    t.rows.push_back({format_real(grid[k]), format_real(mean), format_real(std::sqrt(var / double(used))),
                      std::to_string(used), std::to_string(failed)});
  }
  const std::size_t best = select_best(curve);
  t.note("best_alpha", curve[best].alpha);
  t.note("best_mean_error", curve[best].error);
  for (const auto& pt : curve)
    if (pt.alpha == 1.0) {
      t.note("mean_error_at_alpha_1", pt.error);
      t.note("relative_decrease", (pt.error - curve[best].error) / pt.error);
    }
  return t;
}

namespace detail {

/// Shared driver for de-validate and ge-validate. `approx` receives the
/// model, sizes and per-replication statistics and returns the
/// approximation of the error at each evaluation alpha.
template <typename Approx>
Table run_validation(const ExperimentConfig& cfg, const char* gap_name, Approx&& approx) {
  cfg.validate();
  Table t = start_table(cfg);
  note_rep_seeds(t, cfg);
  t.note("model", cfg.model);
  t.note("n_over_p", cfg.n_over_p);
  t.note("assume_common_cov", cfg.assume_common_cov ? "true" : "false");
  t.header = {"p", "n", "alpha", std::string("mean_") + gap_name, std::string("max_") + gap_name,
              "mean_exact_error", "mean_estimate", "reps_used"};
  const std::size_t na = cfg.eval_alphas.size();
  for (long p : cfg.p_list) {
    const GaussianClassModel model = make_model(cfg, p);
    const auto [n0, n1] = cfg.class_sizes_for(p);
    std::vector<double> gap_sum(na, 0.0), gap_max(na, 0.0), exact_sum(na, 0.0), est_sum(na, 0.0);
    long used = 0;
    for (long rep = 0; rep < cfg.reps; ++rep) {
      const LabeledDataset data = sample_dataset(model, n0, n1, replication_seed(cfg.seed, rep));
      const SampleStatistics stats = compute_sample_statistics(data);
      const AlphaParameterization split(fit_lda(stats).w, stats);
      const std::vector<double> est = approx(model, n0, n1, stats);
      for (std::size_t k = 0; k < na; ++k) {
        const double exact = expected_error_or_constant(split.at(cfg.eval_alphas[k]).realized, model);
        const double gap = std::abs(exact - est[k]);
        gap_sum[k] += gap;
        gap_max[k] = std::max(gap_max[k], gap);
        exact_sum[k] += exact;
        est_sum[k] += est[k];
      }
      ++used;
    }
    double all_sum = 0.0, all_max = 0.0;
    for (std::size_t k = 0; k < na; ++k) {
      all_sum += gap_sum[k];
      all_max = std::max(all_max, gap_max[k]);
      t.rows.push_back({std::to_string(p), std::to_string(n0 + n1), format_real(cfg.eval_alphas[k]),
                        format_real(gap_sum[k] / double(used)), format_real(gap_max[k]),
                        format_real(exact_sum[k] / double(used)), format_real(est_sum[k] / double(used)),
                        std::to_string(used)});
    }
    t.rows.push_back({std::to_string(p), std::to_string(n0 + n1), "all",
                      format_real(all_sum / double(used * long(na))), format_real(all_max), "", "",
                      std::to_string(used)});
  }
  return t;
}

}  // namespace detail

inline Table run_de_validate(const ExperimentConfig& cfg) {
  return detail::run_validation(
      cfg, "abs_exact_minus_de",
      [&](const GaussianClassModel& model, long n0, long n1, const SampleStatistics&) {
        // One DE per (model, n); the sample does not enter.
        const DeterministicEquivalent de(model, n0, n1, cfg.assume_common_cov);
        std::vector<double> out;
        for (double a : cfg.eval_alphas) out.push_back(de.error(a));
        return out;
      });
}

inline Table run_ge_validate(const ExperimentConfig& cfg) {
  return detail::run_validation(
      cfg, "abs_ge_minus_exact",
      [&](const GaussianClassModel&, long, long, const SampleStatistics& stats) {
        const GEstimator ge(stats, cfg.assume_common_cov);
        std::vector<double> out;
        for (double a : cfg.eval_alphas) out.push_back(ge.error(a));
        return out;
      });
}

inline Table run_tune_csv(const ExperimentConfig& cfg) {
  cfg.validate();
  const LabeledDataset train = read_labeled_csv_file(cfg.train_csv);
  if (train.n0() < 2 || train.n1() < 2)
    throw ParameterError("train_csv: each class needs at least 2 rows");
  if (train.dim() >= train.size() - 2)
    throw ParameterError("train_csv: p >= n - 2; more training data is needed");
  const bool has_test = !cfg.test_csv.empty();
  LabeledDataset test;
  if (has_test) {
    test = read_labeled_csv_file(cfg.test_csv);
    if (test.dim() != train.dim()) throw ParameterError("test_csv: feature count differs from train_csv");
  }
  const SampleStatistics stats = compute_sample_statistics(train);
  const LinearDiscriminant base = fit_base_classifier(cfg, train, stats, nullptr, cfg.seed);
  const AlphaParameterization split(base.w, stats);
  const std::vector<double> grid = make_alpha_grid(cfg.grid);
  const bool use_ge = cfg.classifier == "lda";
  if (!use_ge && !has_test)
    throw ParameterError("the G-estimator covers the LDA base only; pass test_csv for " + cfg.classifier);

  AlphaSearchResult by_ge, by_test;
  if (use_ge) by_ge = tune_alpha_via_ge(stats, grid, cfg.assume_common_cov);
  if (has_test)
    by_test = sweep_alpha(grid, [&](double a) { return empirical_error(split.at(a).realized, test); });

  Table t = detail::start_table(cfg);
  t.note("classifier", cfg.classifier);
  t.note("p", std::to_string(train.dim()));
  t.note("n0", std::to_string(train.n0()));
  t.note("n1", std::to_string(train.n1()));
  t.note("ge_flavor", cfg.assume_common_cov ? "common" : "distinct");
  t.header = {"alpha"};
  if (use_ge) {
    t.header.push_back("ge_error");
    t.note("alpha_star_ge", by_ge.alpha_star);
    t.note("ge_error_at_alpha_star_ge", by_ge.error_star);
  }
  if (has_test) {
    t.header.push_back("test_error");
    t.note("n_test", std::to_string(test.size()));
    t.note("alpha_star_empirical", by_test.alpha_star);
    t.note("test_error_at_alpha_star_empirical", by_test.error_star);
    t.note("test_error_at_alpha_1", empirical_error(split.at(1.0).realized, test));
    if (use_ge) {
      const double at_ge = empirical_error(split.at(by_ge.alpha_star).realized, test);
      t.note("test_error_at_alpha_star_ge", at_ge);
      t.note("test_error_gap", at_ge - by_test.error_star);
    }
  }
  for (std::size_t k = 0; k < grid.size(); ++k) {
    std::vector<std::string> row{format_real(grid[k])};
    // Reported values are clamped to [0, 1]; selection above used raw ones.
    if (use_ge) row.push_back(format_real(std::clamp(by_ge.curve[k].error, 0.0, 1.0)));
    if (has_test) row.push_back(format_real(by_test.curve[k].error));
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline Table run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.scenario) {
    case Scenario::known_sweep: return run_known_means_sweep(cfg);
    case Scenario::synth_sweep: return run_synthetic_sweep(cfg);
    case Scenario::de_validate: return run_de_validate(cfg);
    case Scenario::ge_validate: return run_ge_validate(cfg);
    case Scenario::tune: return run_tune_csv(cfg);
  }
  throw ParameterError("unknown scenario");
}

}  // namespace wvtune

#endif  // WVTUNE_EXPERIMENT_HPP
