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
#ifndef WVTUNE_CONFIG_HPP
#define WVTUNE_CONFIG_HPP

// Experiment configuration: a flat set of `key = value` lines. Blank lines
// and lines starting with '#' are ignored.

#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "wvtune/alpha.hpp"
#include "wvtune/csv.hpp"
#include "wvtune/error.hpp"

namespace wvtune {

inline constexpr const char* kVersion = "0.1.0";

enum class Scenario { known_sweep, synth_sweep, de_validate, ge_validate, tune };

inline const char* to_string(Scenario s) {
  switch (s) {
    case Scenario::known_sweep: return "known-sweep";
    case Scenario::synth_sweep: return "synth-sweep";
    case Scenario::de_validate: return "de-validate";
    case Scenario::ge_validate: return "ge-validate";
    case Scenario::tune: return "tune";
  }
  return "?";
}

inline Scenario parse_scenario(const std::string& s) {
  if (s == "known-sweep" || s == "known-means-sweep") return Scenario::known_sweep;
  if (s == "synth-sweep" || s == "synthetic-sweep") return Scenario::synth_sweep;
  if (s == "de-validate") return Scenario::de_validate;
  if (s == "ge-validate") return Scenario::ge_validate;
  if (s == "tune" || s == "tune-csv") return Scenario::tune;
  throw ParameterError("unknown scenario '" + s + "'");
}

namespace detail {

inline double to_real(const std::string& key, const std::string& v) {
  double out;
  if (!parse_real(v, out)) throw ParameterError("config: " + key + " expects a number, got '" + v + "'");
  return out;
}

inline long to_integer(const std::string& key, const std::string& v) {
  const std::string t(trim(v));
  char* end = nullptr;
  errno = 0;
  const long out = std::strtol(t.c_str(), &end, 10);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE)
    throw ParameterError("config: " + key + " expects an integer, got '" + v + "'");
  return out;
}

inline std::uint64_t to_seed(const std::string& key, const std::string& v) {
  const std::string t(trim(v));
  char* end = nullptr;
  errno = 0;
  const unsigned long long out = std::strtoull(t.c_str(), &end, 10);
  if (t.empty() || t[0] == '-' || end != t.c_str() + t.size() || errno == ERANGE)
    throw ParameterError("config: " + key + " expects a non-negative integer, got '" + v + "'");
  return out;
}

inline bool to_bool(const std::string& key, const std::string& v) {
  const std::string t(trim(v));
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ParameterError("config: " + key + " expects true/false, got '" + v + "'");
}

inline std::vector<double> to_real_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (auto cell : split_commas(v)) out.push_back(to_real(key, std::string(cell)));
  return out;
}

inline std::vector<long> to_integer_list(const std::string& key, const std::string& v) {
  std::vector<long> out;
  for (auto cell : split_commas(v)) out.push_back(to_integer(key, std::string(cell)));
  return out;
}

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace detail

struct ExperimentConfig {
  Scenario scenario = Scenario::synth_sweep;

  // Synthetic model: common | distinct | isotropic.
  std::string model = "common";
  long p = 200;
  long n = 400;   // split evenly unless n0/n1 are given
  long n0 = 0;
  long n1 = 0;
  double pi0 = 0.5;
  double isotropic_scale = 1.0;

  // Validation sweeps over dimension at a fixed n/p.
  std::vector<long> p_list = {100, 200, 400};
  double n_over_p = 2.0;
  std::vector<double> eval_alphas = {0.0, 0.25, 0.5, 1.0};

  // Base classifier: lda | nc | rlda | rplda | logistic | svm.
  std::string classifier = "lda";
  double gamma = 1.0;
  long rp_d = 0;  // 0 picks rank(pooled) - 2
  long rp_m = 50;
  double svm_penalty = 1.0;
  double svm_tol = 1e-4;
  long logistic_max_iter = 100;
  bool tune_native = false;

  AlphaGridSpec grid;
  long reps = 100;
  std::uint64_t seed = 1;
  bool assume_common_cov = false;
  std::string w_sign = "positive";  // known-sweep: positive | negative | any

  std::string train_csv;
  std::string test_csv;
  std::string out;

  void set(const std::string& raw_key, const std::string& value) {
    using namespace detail;
    const std::string key(trim(raw_key));
    const std::string v(trim(value));
    if (key == "scenario") scenario = parse_scenario(v);
    else if (key == "model") model = v;
    else if (key == "p") p = to_integer(key, v);
    else if (key == "n") n = to_integer(key, v);
    else if (key == "n0") n0 = to_integer(key, v);
    else if (key == "n1") n1 = to_integer(key, v);
    else if (key == "pi0") pi0 = to_real(key, v);
    else if (key == "isotropic_scale") isotropic_scale = to_real(key, v);
    else if (key == "p_list") p_list = to_integer_list(key, v);
    else if (key == "n_over_p") n_over_p = to_real(key, v);
    else if (key == "eval_alphas") eval_alphas = to_real_list(key, v);
    else if (key == "classifier") classifier = v;
    else if (key == "gamma") gamma = to_real(key, v);
    else if (key == "rp_d") rp_d = to_integer(key, v);
    else if (key == "rp_m") rp_m = to_integer(key, v);
    else if (key == "svm_penalty") svm_penalty = to_real(key, v);
    else if (key == "svm_tol") svm_tol = to_real(key, v);
    else if (key == "logistic_max_iter") logistic_max_iter = to_integer(key, v);
    else if (key == "tune_native") tune_native = to_bool(key, v);
    else if (key == "alpha_min") grid.min = to_real(key, v);
    else if (key == "alpha_max") grid.max = to_real(key, v);
    else if (key == "alpha_step") grid.step = to_real(key, v);
    else if (key == "reps") reps = to_integer(key, v);
    else if (key == "seed") seed = to_seed(key, v);
    else if (key == "assume_common_cov") assume_common_cov = to_bool(key, v);
    else if (key == "w_sign") w_sign = v;
    else if (key == "train_csv") train_csv = v;
    else if (key == "test_csv") test_csv = v;
    else if (key == "out") out = v;
    else throw ParameterError("config: unknown key '" + key + "'");
  }

  void load(std::istream& in, const std::string& source = "<config>") {
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto t = detail::trim(line);
      if (t.empty() || t.front() == '#') continue;
      const auto eq = t.find('=');
      if (eq == std::string_view::npos)
        throw ParameterError(source + ":" + std::to_string(line_no) + ": expected key = value");
      try {
        set(std::string(t.substr(0, eq)), std::string(t.substr(eq + 1)));
      } catch (const ParameterError& e) {
        throw ParameterError(source + ":" + std::to_string(line_no) + ": " + e.what());
      }
    }
  }

  void load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot open config " + path);
    load(in, path);
  }

  /// Class sizes for a single-dimension scenario.
  std::pair<long, long> class_sizes() const {
    if (n0 > 0 || n1 > 0) return {n0, n1};
    return {n / 2, n - n / 2};
  }

  /// Class sizes for dimension `dim` in the validation sweeps.
  std::pair<long, long> class_sizes_for(long dim) const {
    const long total = std::lround(n_over_p * double(dim));
    return {total / 2, total - total / 2};
  }

  void validate() const {
    if (reps < 1) throw ParameterError("reps must be >= 1");
    if (!(pi0 > 0.0 && pi0 < 1.0)) throw ParameterError("pi0 must lie in (0, 1)");
    make_alpha_grid(grid);
    if (model != "common" && model != "distinct" && model != "isotropic")
      throw ParameterError("model must be common, distinct or isotropic");
    static const char* kClassifiers[] = {"lda", "nc", "rlda", "rplda", "logistic", "svm"};
    bool known = false;
    for (const char* c : kClassifiers) known = known || classifier == c;
    if (!known) throw ParameterError("unknown classifier '" + classifier + "'");
    if (classifier == "rlda" && !(gamma > 0.0)) throw ParameterError("gamma must be > 0");
    if (classifier == "svm" && !(svm_penalty > 0.0)) throw ParameterError("svm_penalty must be > 0");

    switch (scenario) {
      case Scenario::known_sweep:
        if (model == "distinct") throw ParameterError("known-sweep needs a common covariance model");
        if (w_sign != "positive" && w_sign != "negative" && w_sign != "any")
          throw ParameterError("w_sign must be positive, negative or any");
        if (p < 4) throw ParameterError("p must be >= 4");
        break;
      case Scenario::synth_sweep: {
        if (p < 4) throw ParameterError("p must be >= 4");
        const auto [a, b] = class_sizes();
        if (a < 2 || b < 2) throw ParameterError("each class needs at least 2 samples");
        break;
      }
      case Scenario::de_validate:
      case Scenario::ge_validate:
        if (p_list.empty() || eval_alphas.empty())
          throw ParameterError("p_list and eval_alphas must be non-empty");
        if (scenario == Scenario::de_validate && assume_common_cov && model == "distinct")
          throw ParameterError("assume_common_cov contradicts model = distinct");
        for (long d : p_list) {
          if (d < 4) throw ParameterError("p_list entries must be >= 4");
          const auto [a, b] = class_sizes_for(d);
          if (a < 2 || b < 2 || d >= a + b - 2)
            throw ParameterError("p=" + std::to_string(d) + " needs p < n - 2 (n=" +
                                 std::to_string(a + b) + ")");
        }
        break;
      case Scenario::tune:
        if (train_csv.empty()) throw ParameterError("tune needs train_csv");
        break;
    }
  }

  /// Stable textual form of every field, used for the config hash.
  std::string canonical() const {
    std::ostringstream s;
    s.precision(17);
    s << "scenario=" << to_string(scenario) << ";model=" << model << ";p=" << p << ";n=" << n
      << ";n0=" << n0 << ";n1=" << n1 << ";pi0=" << pi0 << ";isotropic_scale=" << isotropic_scale
      << ";p_list=";
    for (long d : p_list) s << d << ',';
    s << ";n_over_p=" << n_over_p << ";eval_alphas=";
    for (double a : eval_alphas) s << a << ',';
    s << ";classifier=" << classifier << ";gamma=" << gamma << ";rp_d=" << rp_d
      << ";rp_m=" << rp_m << ";svm_penalty=" << svm_penalty << ";svm_tol=" << svm_tol
      << ";logistic_max_iter=" << logistic_max_iter << ";tune_native=" << tune_native
      << ";alpha_min=" << grid.min << ";alpha_max=" << grid.max << ";alpha_step=" << grid.step
      << ";reps=" << reps << ";seed=" << seed << ";assume_common_cov=" << assume_common_cov
      << ";w_sign=" << w_sign << ";train_csv=" << train_csv << ";test_csv=" << test_csv;
    return s.str();
  }

  std::string hash() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(detail::fnv1a(canonical())));
    return buf;
  }
};

}  // namespace wvtune

#endif  // WVTUNE_CONFIG_HPP
