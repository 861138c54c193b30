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

// Acceptance runner: one [PASS]/[FAIL] line per criterion.
// Usage: acceptance <path-to-wvtune-cli>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "wvtune/wvtune.hpp"

namespace {

using namespace wvtune;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Angle from the rejection of a on b; stays accurate for nearly parallel vectors.
double angle(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const Eigen::VectorXd rejection = a - (a.dot(b) / b.squaredNorm()) * b;
  return std::atan2(rejection.norm() * b.norm(), a.dot(b));
}

Eigen::MatrixXd random_spd(Rng& rng, Eigen::Index p) {
  const Eigen::MatrixXd a = standard_normal_matrix(rng, p, p);
  return a * a.transpose() / double(p) + 0.5 * Eigen::MatrixXd::Identity(p, p);
}

Eigen::VectorXd random_vector(Rng& rng, Eigen::Index p) { return standard_normal_matrix(rng, p, 1).col(0); }

GaussianClassModel random_common_model(Rng& rng, Eigen::Index p) {
  const Eigen::MatrixXd s = random_spd(rng, p);
  return {random_vector(rng, p), random_vector(rng, p), s, s, 0.5, 0.5};
}

// Draws `count` columns from class `c` of `model`.
Eigen::MatrixXd draw(Rng& rng, const GaussianClassModel& model, Label c, Eigen::Index count) {
  const Eigen::MatrixXd l = SpdFactor(model.covariance(c)).lower();
  Eigen::MatrixXd x = l * standard_normal_matrix(rng, model.dim(), count);
  x.colwise() += model.mean(c);
  return x;
}

Outcome lda_recovery() {
  Rng rng = make_rng(101);
  const Eigen::Index dims[] = {5, 50, 200};
  double worst_alpha = 0.0;
  long mismatches = 0;
  for (int k = 0; k < 50; ++k) {
    const GaussianClassModel m = random_common_model(rng, dims[k % 3]);
    const Eigen::VectorXd w = m.sigma0.llt().solve(m.mean_difference());
    worst_alpha = std::max(worst_alpha, std::abs(alpha_mmse(w, m) - 1.0));
    const LinearDiscriminant modified = modified_discriminant_known_means(w, m);
    const LinearDiscriminant lda{w, midpoint_bias(w, m.mu0, m.mu1)};
    const long c1 = std::binomial_distribution<long>(10000, 0.5)(rng);
    Eigen::MatrixXd x(m.dim(), 10000);
    x << draw(rng, m, 0, 10000 - c1), draw(rng, m, 1, c1);
    for (Eigen::Index i = 0; i < x.cols(); ++i)
      mismatches += classify(modified, x.col(i)) != classify(lda, x.col(i));
  }
  return {worst_alpha <= 1e-8 && mismatches == 0,
          "max |alpha-1| = " + fmt("%.2e", worst_alpha) + ", label mismatches = " + std::to_string(mismatches)};
}

Outcome isotropic_collapse() {
  Rng rng = make_rng(102);
  double worst_alpha = 0.0, worst_angle = 0.0;
  for (int k = 0; k < 50; ++k) {
    const Eigen::Index p = 3 + k % 20;
    const double c = 0.1 + 5.0 * std::uniform_real_distribution<double>()(rng);
    const Eigen::MatrixXd s = c * Eigen::MatrixXd::Identity(p, p);
    const GaussianClassModel m{random_vector(rng, p), random_vector(rng, p), s, s, 0.5, 0.5};
    const Eigen::VectorXd w = random_vector(rng, p);
    worst_alpha = std::max(worst_alpha, std::abs(alpha_mmse(w, m)));
    const Eigen::VectorXd dir = modified_discriminant_known_means(w, m).w;
    const Eigen::VectorXd mu = m.mean_difference();
    worst_angle = std::max(worst_angle, angle(dir, w.dot(mu) > 0 ? mu : Eigen::VectorXd(-mu)));
  }
  return {worst_alpha <= 1e-10 && worst_angle <= 1e-8,
          "max |alpha| = " + fmt("%.2e", worst_alpha) + ", max angle = " + fmt("%.2e", worst_angle)};
}

Outcome stationarity() {
  const GaussianClassModel m = common_covariance_model(200);
  const Eigen::VectorXd mu = m.mean_difference();
  Rng rng = make_rng(103);
  int hits[2] = {0, 0};
  double worst[2] = {0.0, 0.0};
  for (int sign = 0; sign < 2; ++sign) {
    for (int k = 0; k < 20; ++k) {
      Eigen::VectorXd w = random_unit_vector(rng, 200);
      if ((w.dot(mu) > 0) != (sign == 0)) w = -w;
      const double a = alpha_mmse(w, m);
      const AlphaGridSpec spec{std::floor(a) - 2.0, std::ceil(a) + 2.0, 0.005};
      const AlphaSearchResult r = sweep_alpha(make_alpha_grid(spec), [&](double x) {
        const double e = expected_error_or_constant(known_means_alpha_discriminant(w, m, x), m);
        return sign == 0 ? e : -e;
      });
      const double off = std::abs(r.alpha_star - a);
      worst[sign] = std::max(worst[sign], off);
      hits[sign] += off <= 0.005 + 1e-12;
    }
  }
  return {hits[0] >= 19 && hits[1] >= 19,
          "argmin hits " + std::to_string(hits[0]) + "/20 (max off " + fmt("%.4f", worst[0]) +
              "), argmax hits " + std::to_string(hits[1]) + "/20 (max off " + fmt("%.4f", worst[1]) + ")"};
}

double golden_section(const std::function<double(double)>& f, double lo, double hi, double tol) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi, c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d, d = c, fd = fc;
      c = b - g * (b - a), fc = f(c);
    } else {
      a = c, c = d, fc = fd;
      d = a + g * (b - a), fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

Outcome mmse_oracle() {
  Rng rng = make_rng(104);
  const long draws = 1'000'000;
  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    const GaussianClassModel m = random_common_model(rng, 4);
    const Eigen::VectorXd w = random_vector(rng, 4);
    Eigen::VectorXd n1(draws), n2(draws);
    const long c1 = std::binomial_distribution<long>(draws, 0.5)(rng);
    const Eigen::MatrixXd x[2] = {draw(rng, m, 0, draws - c1), draw(rng, m, 1, c1)};
    long i = 0;
    for (Label c : {0, 1})
      for (Eigen::Index j = 0; j < x[c].cols(); ++j, ++i) {
        const DecompositionTerms t = decompose_known_means(w, m, x[c].col(j), c);
        n1(i) = t.n1;
        n2(i) = t.second_term;
      }
    const auto objective = [&](double a) { return (n1 + a * n2).squaredNorm() / double(draws); };
    const double mc = golden_section(objective, -100.0, 100.0, 1e-9);
    worst = std::max(worst, std::abs(mc - alpha_mmse(w, m)));
  }
  return {worst <= 5e-3, "max |alpha_mc - alpha_mmse| = " + fmt("%.2e", worst)};
}

Outcome exact_vs_monte_carlo() {
  Rng rng = make_rng(105);
  const Eigen::Index dims[] = {2, 10, 50};
  const long draws = 1'000'000, block = 50'000;
  int within = 0;
  double worst_z = 0.0;
  for (int k = 0; k < 20; ++k) {
    const Eigen::Index p = dims[k % 3];
    std::uniform_real_distribution<double> prior(0.2, 0.8);
    const double pi0 = prior(rng);
    const GaussianClassModel m{0.3 * random_vector(rng, p), 0.3 * random_vector(rng, p), random_spd(rng, p),
                               random_spd(rng, p), pi0, 1.0 - pi0};
    const LinearDiscriminant d{random_vector(rng, p), 0.2 * random_vector(rng, 1)(0)};
    const double exact = expected_error_exact(d, m);
    std::binomial_distribution<long> ones(block, m.pi1);
    long wrong = 0;
    for (long done = 0; done < draws; done += block) {
      const long c1 = ones(rng);
      const LabeledDataset sample{draw(rng, m, 0, block - c1), draw(rng, m, 1, c1)};
      wrong += std::lround(empirical_error(d, sample) * double(block));
    }
    const double z = std::abs(double(wrong) / double(draws) - exact) / std::sqrt(exact * (1 - exact) / double(draws));
    worst_z = std::max(worst_z, z);
    within += z <= 3.0;
  }
  return {within == 20, std::to_string(within) + "/20 within 3 sigma, max z = " + fmt("%.2f", worst_z)};
}

std::string note_of(const Table& t, const std::string& key) {
  for (const auto& c : t.comments)
    if (c.rfind(key + ": ", 0) == 0) return c.substr(key.size() + 2);
  return "nan";
}

Outcome high_noise_gain() {
  ExperimentConfig cfg;
  cfg.p = 400;
  cfg.n = 450;
  cfg.reps = 20;
  const Table t = run_synthetic_sweep(cfg);
  const double gain = std::stod(note_of(t, "relative_decrease"));
  const double best = std::stod(note_of(t, "best_alpha"));
  return {std::abs(gain - 0.30) <= 0.10 && best >= 0.1 && best <= 0.5,
          "relative decrease " + fmt("%.3f", gain) + " at alpha " + fmt("%.3f", best) + " (reps used " +
              note_of(t, "reps_used") + ")"};
}

Outcome low_noise_regime() {
  ExperimentConfig cfg;
  cfg.p = 10;
  cfg.n = 500;
  cfg.reps = 20;
  const Table t = run_synthetic_sweep(cfg);
  const double best = std::stod(note_of(t, "best_alpha"));
  return {std::abs(best - 1.0) <= cfg.grid.step + 1e-12, "best alpha " + fmt("%.3f", best)};
}

Outcome fixed_point_closed_forms() {
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(100, 100);
  const FixedPointSolution iso = solve_fixed_point(eye, eye, 101, 101);
  const double iso_err = std::max(std::abs(iso.delta_tilde - 1.0), std::abs(iso.nu_tilde - 1.0));
  Rng rng = make_rng(108);
  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    const Eigen::Index p = 10 + 15 * k;
    const Eigen::MatrixXd s = k % 2 ? random_spd(rng, p) : equicorrelated_covariance(p);
    const long n0 = p / 2 + 7 + k, n1 = p + 3;
    const FixedPointSolution fp = solve_fixed_point(s, s, n0, n1);
    const Eigen::MatrixXd q = fixed_point_resolvent(s, s, n0, n1, fp.delta_tilde, fp.nu_tilde);
    const Eigen::MatrixXd want = tau_factor(p, n0 + n1) * s.inverse();
    worst = std::max(worst, (q - want).norm() / want.norm());
  }
  return {iso_err <= 1e-9 && worst <= 1e-8,
          "identity: |delta-1| = " + fmt("%.1e", iso_err) + "; max rel |Q - tau inv(S)| = " + fmt("%.1e", worst)};
}

Outcome de_consistency() {
  ExperimentConfig cfg;
  cfg.scenario = Scenario::de_validate;
  cfg.model = "common";
  cfg.p_list = {100, 200, 400};
  cfg.n_over_p = 2.0;
  cfg.reps = 20;
  cfg.assume_common_cov = true;
  const Table t = run_de_validate(cfg);
  std::map<std::string, std::vector<double>> gaps;  // alpha -> gap per p
  for (const auto& row : t.rows)
    if (row[2] != "all") gaps[row[2]].push_back(std::stod(row[3]));
  bool pass = true;
  std::string detail;
  for (const auto& [alpha, g] : gaps) {
    const bool mono = g[1] <= g[0] && g[2] <= g[1];
    const bool ok = mono && g[2] <= 0.02;
    pass = pass && ok;
    detail += (detail.empty() ? "" : "; ") + std::string("alpha ") + alpha + ": " + fmt("%.4f", g[0]) + " > " +
              fmt("%.4f", g[1]) + " > " + fmt("%.4f", g[2]) + (ok ? "" : mono ? " (above 0.02)" : " (not monotone)");
  }
  return {pass, detail};
}

Outcome ge_consistency() {
  const GaussianClassModel m = common_covariance_model(200);
  const std::vector<double> alphas = {0.0, 0.25, 0.5, 1.0};
  std::vector<double> gap_c(alphas.size(), 0.0), gap_d(alphas.size(), 0.0);
  double agree = 0.0;
  const int reps = 20;
  for (int r = 0; r < reps; ++r) {
    const SampleStatistics s = compute_sample_statistics(sample_dataset(m, 200, 200, replication_seed(1, r)));
    const AlphaParameterization split(fit_lda(s).w, s);
    const GEstimator common(s, true), distinct(s, false);
    for (std::size_t k = 0; k < alphas.size(); ++k) {
      const double exact = expected_error_exact(split.at(alphas[k]).realized, m);
      const double c = common.error(alphas[k]), d = distinct.error(alphas[k]);
      gap_c[k] += std::abs(c - exact) / reps;
      gap_d[k] += std::abs(d - exact) / reps;
      agree = std::max(agree, std::abs(c - d));
    }
  }
  const double worst_c = *std::max_element(gap_c.begin(), gap_c.end());
  const double worst_d = *std::max_element(gap_d.begin(), gap_d.end());
  return {worst_c <= 0.03 && worst_d <= 0.03 && agree <= 0.01,
          "max mean gap common " + fmt("%.4f", worst_c) + ", distinct " + fmt("%.4f", worst_d) +
              ", max disagreement " + fmt("%.4f", agree)};
}

Outcome de_path_coherence() {
  const std::vector<double> grid = make_alpha_grid({});
  double worst = 0.0;
  const struct {
    Eigen::Index p, n0, n1;
  } cases[] = {{100, 100, 100}, {400, 225, 225}, {150, 120, 260}};
  for (const auto& c : cases) {
    const GaussianClassModel m = common_covariance_model(c.p);
    const DeterministicEquivalent closed(m, c.n0, c.n1, true), general(m, c.n0, c.n1, false);
    for (double a : grid) worst = std::max(worst, std::abs(closed.error(a) - general.error(a)));
  }
  return {worst <= 1e-6, "max |difference| over the grid = " + fmt("%.2e", worst)};
}

Outcome ge_tuning_quality() {
  const GaussianClassModel m = common_covariance_model(256);
  const std::vector<double> grid = make_alpha_grid({});
  int within = 0;
  double worst = 0.0;
  for (int r = 0; r < 20; ++r) {
    const SampleStatistics s = compute_sample_statistics(sample_dataset(m, 200, 200, replication_seed(12, r)));
    const AlphaParameterization split(fit_lda(s).w, s);
    const AlphaSearchResult by_ge = tune_alpha_via_ge(s, grid, true);
    const AlphaSearchResult by_exact =
        sweep_alpha(grid, [&](double a) { return expected_error_or_constant(split.at(a).realized, m); });
    const double gap = expected_error_or_constant(split.at(by_ge.alpha_star).realized, m) - by_exact.error_star;
    worst = std::max(worst, gap);
    within += gap <= 0.01;
  }
  return {within >= 18, std::to_string(within) + "/20 within 0.01, max gap " + fmt("%.4f", worst)};
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome cli_determinism(const std::string& cli) {
  if (cli.empty()) return {false, "CLI path not given"};
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "wvtune_acceptance_cli";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const GaussianClassModel m = common_covariance_model(20);
  for (const auto& [name, n, seed] : {std::tuple{"train.csv", 40L, 1ULL}, std::tuple{"test.csv", 300L, 2ULL}}) {
    std::ofstream out(dir / name);
    write_labeled_csv(out, sample_dataset(m, n, n, seed));
  }
  const std::string csvs = " --set train_csv=" + (dir / "train.csv").string() + " --set test_csv=" +
                           (dir / "test.csv").string();
  const std::vector<std::pair<std::string, std::string>> runs = {
      {"known-sweep", "known-sweep --seed 5"},
      {"synth-lda", "synth-sweep --seed 5 --reps 3 --set p=30 --set n=60"},
      {"synth-rplda", "synth-sweep --seed 5 --reps 2 --set p=30 --set n=40 --set classifier=rplda --set rp_m=5"},
      {"synth-svm", "synth-sweep --seed 5 --reps 2 --set p=10 --set n=40 --set classifier=svm --alpha-step 0.05"},
      {"synth-logistic", "synth-sweep --seed 5 --reps 2 --set p=10 --set n=80 --set classifier=logistic"},
      {"de-validate", "de-validate --seed 5 --reps 2 --set p_list=20,40"},
      {"ge-validate", "ge-validate --seed 5 --reps 2 --set p_list=20,40"},
      {"tune", "tune --seed 5" + csvs},
  };
  int same = 0;
  std::string bad;
  for (const auto& [tag, args] : runs) {
    std::string out[2];
    bool ran = true;
    for (int k = 0; k < 2; ++k) {
      const fs::path file = dir / (tag + "_" + std::to_string(k) + ".csv");
      const std::string cmd = "\"" + cli + "\" " + args + " --out " + file.string();
      ran = ran && std::system(cmd.c_str()) == 0;
      out[k] = slurp(file);
    }
    if (ran && !out[0].empty() && out[0] == out[1]) ++same;
    else bad += (bad.empty() ? " differing: " : ", ") + tag + (ran ? "" : " (run failed)");
  }
  fs::remove_all(dir);
  return {same == int(runs.size()), std::to_string(same) + "/" + std::to_string(runs.size()) +
                                        " scenario runs byte-identical" + bad};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"AC1 LDA recovery under known statistics", lda_recovery},
      {"AC2 isotropic collapse", isotropic_collapse},
      {"AC3 stationary point at alpha_mmse", stationarity},
      {"AC4 alpha_mmse vs Monte Carlo MMSE", mmse_oracle},
      {"AC5 exact error vs Monte Carlo", exact_vs_monte_carlo},
      {"AC6 high-noise gain (p=400, n=450)", high_noise_gain},
      {"AC7 low-noise regime (p=10, n=500)", low_noise_regime},
      {"AC8 fixed-point closed forms", fixed_point_closed_forms},
      {"AC9 deterministic-equivalent consistency", de_consistency},
      {"AC10 G-estimator consistency", ge_consistency},
      {"AC11 common vs general DE path", de_path_coherence},
      {"AC12 G-estimator tuning quality", ge_tuning_quality},
      {"AC13 CLI determinism", [&] { return cli_determinism(cli); }},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d/%zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
