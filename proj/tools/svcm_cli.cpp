// Copyright 2026 The svcm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// svcm: command-line front end.
//
// Exit codes: 0 success, 1 usage error (bad flags or invalid parameter
// values), 2 runtime or numeric failure.

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "svcm/experiments.hpp"
#include "svcm/model.hpp"
#include "svcm/montecarlo.hpp"
#include "svcm/statistics.hpp"
#include "svcm/theory.hpp"

namespace {

using namespace svcm;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RuntimeFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string g(double x, int digits = 10) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

// One decimal number per line; blank lines and '#' comments are ignored.
std::vector<double> read_sample_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("--input: cannot open '" + path + "'");
  std::vector<double> values;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = line.substr(0, line.find('#'));
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    const std::string token = line.substr(first, last - first + 1);
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end == token.c_str() || *end != '\0' || !std::isfinite(v)) {
      throw UsageError("--input: " + path + ":" + std::to_string(lineno) +
                       ": not a finite number: '" + token + "'");
    }
    values.push_back(v);
  }
  if (values.empty()) throw UsageError("--input: '" + path + "' holds no observations");
  return values;
}

TestId which_or_throw(const std::string& which) {
  try {
    return parse_test_id(which);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--which: ") + e.what());
  }
}

std::optional<MixtureParams> lr_params_from(TestId test, const std::optional<double>& eps,
                                            const std::optional<double>& sigma) {
  if (test != TestId::kLR) return std::nullopt;
  if (!eps || !sigma) throw UsageError("--which lr requires both --epsilon and --sigma");
  MixtureParams p(*eps, *sigma);
  if (p.epsilon() == 0.0) throw UsageError("--epsilon must be > 0 for the LR alternative");
  if (p.sigma() == 1.0) throw UsageError("--sigma must differ from 1 for an alternative");
  return p;
}

RegimeSpec regime_from(const std::string& regime, double beta, const std::optional<double>& gamma,
                       const std::optional<double>& sigma, const std::string& side) {
  const RegimeKind kind = parse_regime_kind(regime);
  if (kind == RegimeKind::kFixed) {
    if (!sigma) throw UsageError("--regime fixed requires --sigma");
    return RegimeSpec::fixed(beta, *sigma);
  }
  if (!gamma) throw UsageError("--regime " + regime + " requires --gamma");
  if (kind == RegimeKind::kNearZero) return RegimeSpec::near_zero(beta, *gamma);
  return RegimeSpec::near_one(beta, *gamma, parse_side(side));
}

std::unique_ptr<CalibrationCache> open_cache(const std::string& dir) {
  if (dir.empty()) return nullptr;
  return std::make_unique<CalibrationCache>(dir);
}

NullCalibration get_calibration(CalibrationCache* cache, TestId test, std::int64_t n,
                                std::size_t b, std::uint64_t seed,
                                const std::optional<MixtureParams>& lr, unsigned threads) {
  if (cache) return cache->get_or_compute(test, n, b, seed, lr, threads);
  return calibrate_null(test, n, b, seed, lr, threads);
}

struct Common {
  unsigned threads = 0;
  std::string cache_dir;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse variance contamination: sampling, detection tests, power experiments"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--threads", common.threads, "Worker threads (0 = all cores)");
  app.add_option("--cache-dir", common.cache_dir, "Directory for persisted null tables")
      ->envname("SVCM_CACHE_DIR");

  // sample
  auto* sample_cmd = app.add_subcommand("sample", "Draw a sample from the mixture");
  std::int64_t s_n = 0;
  double s_eps = 0.0, s_sigma = 1.0;
  std::uint64_t s_seed = 0;
  std::string s_out;
  sample_cmd->add_option("--n", s_n, "Sample size")->required()->check(CLI::PositiveNumber);
  sample_cmd->add_option("--epsilon", s_eps, "Contamination proportion in [0, 1/2)");
  sample_cmd->add_option("--sigma", s_sigma, "Contaminated standard deviation");
  sample_cmd->add_option("--seed", s_seed, "Stream seed");
  sample_cmd->add_option("--out", s_out, "Output file (default: stdout)");

  // test
  auto* test_cmd = app.add_subcommand("test", "Evaluate one test on a sample file");
  std::string t_which, t_input, t_cal;
  std::optional<double> t_eps, t_sigma;
  std::size_t t_b = 0;
  std::uint64_t t_seed = 0;
  test_cmd->add_option("--which", t_which, "lr | chisq | extremes | hc")->required();
  test_cmd->add_option("--input", t_input, "One observation per line")->required();
  test_cmd->add_option("--epsilon", t_eps, "LR alternative epsilon");
  test_cmd->add_option("--sigma", t_sigma, "LR alternative sigma");
  test_cmd->add_option("--cal", t_cal, "Null calibration table for lr/hc");
  test_cmd->add_option("--B", t_b, "Calibrate lr/hc on the fly with B null replicates");
  test_cmd->add_option("--seed", t_seed, "Seed for on-the-fly calibration");

  // calibrate
  auto* cal_cmd = app.add_subcommand("calibrate", "Simulate and save a null table");
  std::string c_which, c_out;
  std::int64_t c_n = 0;
  std::size_t c_b = 0;
  std::uint64_t c_seed = 0;
  std::optional<double> c_eps, c_sigma;
  cal_cmd->add_option("--which", c_which, "lr | chisq | extremes | hc")->required();
  cal_cmd->add_option("--n", c_n, "Sample size")->required()->check(CLI::PositiveNumber);
  cal_cmd->add_option("--B", c_b, "Null replicates (>= 100)")->required();
  cal_cmd->add_option("--seed", c_seed, "Base seed");
  cal_cmd->add_option("--epsilon", c_eps, "LR alternative epsilon");
  cal_cmd->add_option("--sigma", c_sigma, "LR alternative sigma");
  cal_cmd->add_option("--out", c_out, "Table file")->required();

  // power
  auto* power_cmd = app.add_subcommand("power", "Empirical power of one test");
  std::string p_which, p_regime, p_side = "above";
  double p_beta = 0.0, p_alpha = 0.05;
  std::optional<double> p_gamma, p_sigma;
  std::int64_t p_n = 10000;
  std::size_t p_reps = 200, p_b = 2000;
  std::uint64_t p_seed = 0;
  bool p_risk = false;
  power_cmd->add_option("--which", p_which, "lr | chisq | extremes | hc")->required();
  power_cmd->add_option("--regime", p_regime, "near-zero | near-one | fixed")->required();
  power_cmd->add_option("--beta", p_beta, "Sparsity exponent in (0, 1)")->required();
  auto* p_gamma_opt = power_cmd->add_option("--gamma", p_gamma, "Exponent for near-zero/near-one");
  power_cmd->add_option("--sigma", p_sigma, "Fixed sigma")->excludes(p_gamma_opt);
  power_cmd->add_option("--side", p_side, "near-one side: below | above");
  power_cmd->add_option("--n", p_n, "Sample size")->check(CLI::PositiveNumber);
  power_cmd->add_option("--reps", p_reps, "Alternative replicates")->check(CLI::PositiveNumber);
  power_cmd->add_option("--alpha", p_alpha, "Level");
  power_cmd->add_option("--B", p_b, "Null replicates for lr/hc");
  power_cmd->add_option("--seed", p_seed, "Base seed");
  power_cmd->add_flag("--risk", p_risk, "Also report Type I + Type II error");

  // scenario
  auto* sc_cmd = app.add_subcommand("scenario", "Run a power-curve scenario to CSV");
  std::string sc_preset, sc_config, sc_out, sc_svg, sc_grid, sc_tests, sc_name;
  std::optional<std::int64_t> sc_n;
  std::optional<std::size_t> sc_reps, sc_b;
  std::optional<double> sc_alpha, sc_beta;
  std::optional<std::uint64_t> sc_seed;
  bool sc_full = false;
  sc_cmd->add_option("--preset", sc_preset, "A | B | C | D");
  sc_cmd->add_option("--config", sc_config, "key=value file (flags win on conflict)");
  sc_cmd->add_option("--name", sc_name, "Scenario label");
  sc_cmd->add_option("--n", sc_n, "Sample size")->check(CLI::PositiveNumber);
  sc_cmd->add_option("--reps", sc_reps, "Replicates per grid point")->check(CLI::PositiveNumber);
  sc_cmd->add_option("--B", sc_b, "Null replicates for lr/hc");
  sc_cmd->add_option("--alpha", sc_alpha, "Level");
  sc_cmd->add_option("--beta", sc_beta, "Sparsity exponent");
  sc_cmd->add_option("--seed", sc_seed, "Base seed");
  sc_cmd->add_option("--grid", sc_grid, "Comma-separated coordinates");
  sc_cmd->add_option("--tests", sc_tests, "Comma-separated subset of lr,chisq,extremes,hc");
  sc_cmd->add_flag("--full-scale", sc_full, "n = 1e5 and B = 1e4");
  sc_cmd->add_option("--out", sc_out, "CSV output")->required();
  sc_cmd->add_option("--svg", sc_svg, "Optional SVG plot");

  // boundary
  auto* b_cmd = app.add_subcommand("boundary", "Detection boundary and verdict");
  std::string b_which, b_regime, b_side = "above";
  double b_beta = 0.0, b_tol = kNearBoundaryTolerance;
  std::optional<double> b_gamma, b_sigma;
  b_cmd->add_option("--which", b_which, "lr | chisq | extremes | hc")->required();
  b_cmd->add_option("--regime", b_regime, "near-zero | near-one | fixed")->required();
  b_cmd->add_option("--beta", b_beta, "Sparsity exponent in (0, 1)")->required();
  auto* b_gamma_opt = b_cmd->add_option("--gamma", b_gamma, "Classify at this gamma");
  b_cmd->add_option("--sigma", b_sigma, "Classify at this sigma")->excludes(b_gamma_opt);
  b_cmd->add_option("--side", b_side, "near-one side: below | above");
  b_cmd->add_option("--tolerance", b_tol, "Near-boundary band");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  const char* op = "svcm";
  try {
    std::unique_ptr<CalibrationCache> cache = open_cache(common.cache_dir);

    if (*sample_cmd) {
      op = "sample";
      const MixtureParams params(s_eps, s_sigma);
      if (params.epsilon() > 0.0 && params.sigma() == 1.0) {
        throw UsageError("--sigma 1 with --epsilon > 0 is not an alternative");
      }
      const Sample s = sample(params, s_n, s_seed);
      std::ofstream file;
      if (!s_out.empty()) {
        file.open(s_out, std::ios::trunc);
        if (!file) throw RuntimeFailure("cannot open '" + s_out + "' for writing");
      }
      std::ostream& out = s_out.empty() ? std::cout : file;
      out << "# svcm sample n=" << s_n << " epsilon=" << g(s_eps, 17) << " sigma="
          << g(s_sigma, 17) << " seed=" << s_seed << "\n";
      for (double x : s.values) out << g(x, 17) << "\n";
      out.flush();
      if (!out) throw RuntimeFailure("write failed");
      return 0;
    }

    if (*test_cmd) {
      op = "test";
      const TestId test = which_or_throw(t_which);
      const auto lr = lr_params_from(test, t_eps, t_sigma);
      const std::vector<double> values = read_sample_file(t_input);
      std::optional<NullCalibration> cal;
      if (!t_cal.empty() || t_b > 0) {
        if (test != TestId::kLR && test != TestId::kHC) {
          throw UsageError("--cal/--B only apply to lr and hc");
        }
      }
      if (!t_cal.empty()) {
        cal = load_calibration(t_cal);
        if (cal->test != test) throw UsageError("--cal: table is for another test");
        if (cal->lr_params != lr) throw UsageError("--cal: table is for other LR parameters");
      } else if (t_b > 0) {
        const auto n = static_cast<std::int64_t>(values.size());
        cal = get_calibration(cache.get(), test, n, t_b, t_seed, lr, common.threads);
      }
      const TestOutcome o = evaluate_test(test, values, cal ? &*cal : nullptr, lr);
      std::cout << to_string(o.test) << ',' << g(o.statistic) << ','
                << (o.p_value ? g(*o.p_value) : std::string()) << ','
                << to_string(o.calibration) << "\n";
      return 0;
    }

    if (*cal_cmd) {
      op = "calibrate";
      const TestId test = which_or_throw(c_which);
      const auto lr = lr_params_from(test, c_eps, c_sigma);
      const NullCalibration cal = calibrate_null(test, c_n, c_b, c_seed, lr, common.threads);
      save_calibration(cal, c_out);
      const auto& s = cal.sorted_stats;
      std::cout << "wrote " << c_out << ": " << to_string(test) << " n=" << c_n
                << " B=" << s.size() << " seed=" << c_seed
                << " q95=" << g(s[static_cast<std::size_t>(0.95 * (s.size() - 1))]) << "\n";
      return 0;
    }

    if (*power_cmd) {
      op = "power";
      const TestId test = which_or_throw(p_which);
      const RegimeSpec spec = regime_from(p_regime, p_beta, p_gamma, p_sigma, p_side);
      const MixtureParams alt = resolve_regime(spec, p_n);
      if (alt.sigma() == 1.0) throw UsageError("--sigma 1 is not an alternative");
      std::optional<NullCalibration> cal;
      if (test == TestId::kLR || test == TestId::kHC) {
        const std::optional<MixtureParams> lr =
            test == TestId::kLR ? std::optional<MixtureParams>(alt) : std::nullopt;
        cal = get_calibration(cache.get(), test, p_n, p_b, p_seed, lr, common.threads);
      }
      const NullCalibration* cal_ptr = cal ? &*cal : nullptr;
      const PowerEstimate est =
          empirical_power(test, alt, p_n, p_reps, p_alpha, p_seed, cal_ptr, common.threads);
      std::cout << "test,regime,beta,coordinate,epsilon,sigma,power,ci_low,ci_high,reps,alpha,seed"
                << (p_risk ? ",risk" : "") << "\n";
      std::cout << to_string(test) << ',' << to_string(spec.kind()) << ',' << g(p_beta, 6) << ','
                << g(spec.coordinate(), 6) << ',' << g(alt.epsilon(), 6) << ','
                << g(alt.sigma(), 6) << ',' << g(est.power, 6) << ',' << g(est.ci_low, 6)
                << ',' << g(est.ci_high, 6) << ',' << est.reps << ',' << g(p_alpha, 6) << ','
                << p_seed;
      if (p_risk) {
        const double type_one =
            estimate_type_one(test, p_n, p_reps, p_alpha, p_seed, cal_ptr, common.threads);
        std::cout << ',' << g(type_one + 1.0 - est.power, 6);
      }
      std::cout << "\n";
      return 0;
    }

    if (*sc_cmd) {
      op = "scenario";
      ScenarioConfig config;
      std::map<std::string, std::string> entries;
      if (!sc_config.empty()) entries = read_config_file(sc_config);
      std::string preset_name = sc_preset;
      if (preset_name.empty() && entries.count("preset")) preset_name = entries["preset"];
      if (!preset_name.empty()) config = preset(preset_name);
      apply_config(config, entries);
      if (!sc_name.empty()) config.name = sc_name;
      if (sc_full) apply_full_scale(config);
      if (sc_n) config.n = *sc_n;
      if (sc_reps) config.reps = *sc_reps;
      if (sc_b) config.calibration_replicates = *sc_b;
      if (sc_alpha) config.alpha = *sc_alpha;
      if (sc_beta) config.beta = *sc_beta;
      if (sc_seed) config.seed = *sc_seed;
      std::map<std::string, std::string> lists;
      if (!sc_grid.empty()) lists["grid"] = sc_grid;
      if (!sc_tests.empty()) lists["tests"] = sc_tests;
      apply_config(config, lists);
      if (app.get_option("--threads")->count() > 0) config.threads = common.threads;
      if (preset_name.empty() && sc_config.empty() && sc_grid.empty()) {
        throw UsageError("scenario needs --preset, --config or --grid");
      }
      const auto rows = run_scenario(config, cache.get());
      emit_csv(rows, std::filesystem::path(sc_out));
      if (!sc_svg.empty()) write_svg(rows, std::filesystem::path(sc_svg));
      std::cerr << "wrote " << rows.size() << " rows to " << sc_out << "\n";
      return 0;
    }

    if (*b_cmd) {
      op = "boundary";
      const TestId test = which_or_throw(b_which);
      const RegimeKind kind = parse_regime_kind(b_regime);
      // A placeholder coordinate is enough to ask for the boundary.
      const double placeholder = kind == RegimeKind::kFixed ? 2.0 : 0.5;
      const std::optional<double> gamma = b_gamma ? b_gamma : std::optional(placeholder);
      const std::optional<double> sigma = b_sigma ? b_sigma : std::optional(placeholder);
      const RegimeSpec spec = regime_from(b_regime, b_beta, gamma, sigma, b_side);
      const char* name = kind == RegimeKind::kFixed ? "sigma*" : "gamma*";
      const auto boundary = detection_boundary(test, spec);
      std::cout << name << " = " << (boundary ? g(*boundary, 7) : std::string("none")) << "\n";
      if (b_gamma || b_sigma) {
        if (kind == RegimeKind::kFixed && b_gamma) throw UsageError("--regime fixed takes --sigma");
        if (kind != RegimeKind::kFixed && b_sigma) throw UsageError("this regime takes --gamma");
        const BoundaryVerdict v = classify(test, spec, b_tol);
        std::cout << "verdict = " << to_string(v.verdict) << " (margin = " << g(v.margin, 7)
                  << ")\n";
      }
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "svcm " << op << ": " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "svcm " << op << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "svcm " << op << ": " << e.what() << "\n";
    return 2;
  }
  return 1;
}
