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

// wvtune <known-sweep|synth-sweep|de-validate|ge-validate|tune> [options]
//
// Exit status: 0 on success, 2 for configuration errors, 3 for numerical
// failures.

#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wvtune/experiment.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

// The innermost nested exception decides the exit status; ObjectiveError
// only wraps the real cause.
int classify_failure(const std::exception& e, std::string& message) {
  message += e.what();
  try {
    std::rethrow_if_nested(e);
  } catch (const std::exception& inner) {
    message += "\n  caused by: ";
    return classify_failure(inner, message);
  } catch (...) {
  }
  if (dynamic_cast<const wvtune::NumericalError*>(&e)) return kExitNumerical;
  return kExitConfig;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weight-vector tuning of linear classifiers along a scalar alpha"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", wvtune::kVersion);

  std::string config_path, out_path;
  std::optional<std::uint64_t> seed;
  std::optional<long> reps;
  std::optional<double> alpha_min, alpha_max, alpha_step;
  bool common_cov = false;
  std::vector<std::string> overrides;

  const std::vector<std::pair<const char*, const char*>> commands = {
      {"known-sweep", "exact error over alpha for a random unit w under known means"},
      {"synth-sweep", "mean exact error over alpha across synthetic training sets"},
      {"de-validate", "gap between exact error and its deterministic equivalent"},
      {"ge-validate", "gap between the G-estimated and the exact error"},
      {"tune", "tune alpha on CSV training data (optionally scored on test CSV)"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "key = value configuration file");
    sub->add_option("--seed", seed, "root random seed");
    sub->add_option("--out", out_path, "output CSV path (default: stdout)");
    sub->add_option("--reps", reps, "number of replications");
    sub->add_option("--alpha-min", alpha_min, "first alpha of the grid");
    sub->add_option("--alpha-max", alpha_max, "last alpha of the grid");
    sub->add_option("--alpha-step", alpha_step, "alpha grid step");
    sub->add_flag("--assume-common-cov", common_cov, "use the common-covariance formulas");
    sub->add_option("--set", overrides, "extra key=value settings, applied last");
  }

  CLI11_PARSE(app, argc, argv);
  const std::string scenario = app.get_subcommands().front()->get_name();

  try {
    wvtune::ExperimentConfig cfg;
    cfg.scenario = wvtune::parse_scenario(scenario);
    // Tuning on real data plots the common-covariance G-estimator by default.
    if (cfg.scenario == wvtune::Scenario::tune) cfg.assume_common_cov = true;
    if (!config_path.empty()) cfg.load_file(config_path);
    cfg.scenario = wvtune::parse_scenario(scenario);
    if (seed) cfg.seed = *seed;
    if (reps) cfg.reps = *reps;
    if (alpha_min) cfg.grid.min = *alpha_min;
    if (alpha_max) cfg.grid.max = *alpha_max;
    if (alpha_step) cfg.grid.step = *alpha_step;
    if (common_cov) cfg.assume_common_cov = true;
    if (!out_path.empty()) cfg.out = out_path;
    for (const std::string& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw wvtune::ParameterError("--set expects key=value, got '" + kv + "'");
      cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    cfg.scenario = wvtune::parse_scenario(scenario);

    const std::string table = wvtune::run_experiment(cfg).render();
    if (cfg.out.empty()) {
      std::cout << table;
    } else {
      std::ofstream out(cfg.out, std::ios::binary);
      if (!out) throw wvtune::ParameterError("cannot write " + cfg.out);
      out << table;
    }
    return 0;
  } catch (const std::exception& e) {
    std::string message;
    const int code = classify_failure(e, message);
    std::cerr << "wvtune " << scenario << ": " << message << '\n';
    return code;
  }
}
