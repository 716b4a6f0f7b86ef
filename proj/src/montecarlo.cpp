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

#include "svcm/montecarlo.hpp"

#include <algorithm>
#include <bit>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "svcm/parallel.hpp"
#include "svcm/rng.hpp"

namespace svcm {

namespace {

bool uses_monte_carlo(TestId test) { return test == TestId::kLR || test == TestId::kHC; }

void check_lr_params(const std::optional<MixtureParams>& lr_params, const char* what) {
  if (!lr_params) {
    throw std::invalid_argument(std::string(what) + ": the LR test needs epsilon and sigma");
  }
  if (lr_params->epsilon() == 0.0 || lr_params->sigma() == 1.0) {
    throw std::invalid_argument(std::string(what) +
                                ": LR parameters must have epsilon > 0 and sigma != 1");
  }
}

void check_level(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
}

void check_cal(TestId test, std::int64_t n, const NullCalibration* cal, const char* what) {
  if (uses_monte_carlo(test) != (cal != nullptr)) {
    throw std::invalid_argument(std::string(what) + ": a calibration table is required for " +
                                "lr/hc and not accepted for chisq/extremes");
  }
  if (cal && (cal->test != test || cal->n != n)) {
    throw std::invalid_argument(std::string(what) + ": calibration table is for " +
                                std::string(to_string(cal->test)) + " at n=" +
                                std::to_string(cal->n));
  }
}

double p_value_of(TestId test, std::span<double> values, const NullCalibration* cal) {
  switch (test) {
    case TestId::kChiSquared:
      return chi_squared_test(values).outcome.p_value->value();
    case TestId::kExtremes:
      return extremes_test(values).outcome.p_value->value();
    case TestId::kLR:
    case TestId::kHC:
      return mc_p_value(*cal, compute_statistic(test, values, cal->lr_params));
  }
  return 1.0;
}

std::size_t count_rejections(TestId test, const MixtureParams& law, std::int64_t n,
                             std::size_t reps, double alpha, std::uint64_t base_seed,
                             Phase phase, const NullCalibration* cal, unsigned threads) {
  std::vector<unsigned char> rejected(reps, 0);
  const std::uint64_t tag = test_tag(test);
  parallel_for(reps, threads, [&](std::size_t j) {
    std::vector<double> values(static_cast<std::size_t>(n));
    sample_into(law, derive_stream_seed(base_seed, tag, phase, j), values);
    rejected[j] = p_value_of(test, values, cal) < alpha ? 1 : 0;
  });
  std::size_t total = 0;
  for (unsigned char r : rejected) total += r;
  return total;
}

std::string hexfloat(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", x);
  return buf;
}

double parse_double(const std::string& text, const std::filesystem::path& path) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0') {
    throw std::runtime_error(path.string() + ": bad number '" + text + "'");
  }
  return v;
}

}  // namespace

std::uint64_t test_tag(TestId test) noexcept { return static_cast<std::uint64_t>(test) + 1; }

double compute_statistic(TestId test, std::span<double> values,
                         const std::optional<MixtureParams>& lr_params) {
  switch (test) {
    case TestId::kLR:
      check_lr_params(lr_params, "compute_statistic");
      return log_likelihood_ratio(values, *lr_params);
    case TestId::kChiSquared:
      return chi_squared_test(values).outcome.statistic;
    case TestId::kExtremes:
      return extremes_test(values).outcome.statistic;
    case TestId::kHC:
      return higher_criticism_inplace(values);
  }
  return 0.0;
}

NullCalibration calibrate_null(TestId test, std::int64_t n, std::size_t replicates,
                               std::uint64_t base_seed, std::optional<MixtureParams> lr_params,
                               unsigned threads) {
  if (n < 1) throw std::invalid_argument("calibrate_null: n must be >= 1");
  if (replicates < kMinCalibrationReplicates) {
    throw std::invalid_argument("calibrate_null: need at least 100 replicates, got " +
                                std::to_string(replicates));
  }
  if (test == TestId::kLR) {
    check_lr_params(lr_params, "calibrate_null");
  } else {
    lr_params.reset();
  }
  NullCalibration cal{test, n, base_seed, lr_params, std::vector<double>(replicates)};
  const std::uint64_t tag = test_tag(test);
  const MixtureParams null = MixtureParams::null();
  parallel_for(replicates, threads, [&](std::size_t j) {
    std::vector<double> values(static_cast<std::size_t>(n));
    sample_into(null, derive_stream_seed(base_seed, tag, Phase::kCalibration, j), values);
    cal.sorted_stats[j] = compute_statistic(test, values, lr_params);
  });
  std::sort(cal.sorted_stats.begin(), cal.sorted_stats.end());
  return cal;
}

Probability mc_p_value(const NullCalibration& cal, double observed) {
  const auto& s = cal.sorted_stats;
  const auto at_least = static_cast<double>(s.end() - std::lower_bound(s.begin(), s.end(), observed));
  return Probability((1.0 + at_least) / (static_cast<double>(s.size()) + 1.0));
}

TestOutcome attach_mc_p_value(TestOutcome outcome, const NullCalibration& cal) {
  if (cal.test != outcome.test) {
    throw std::invalid_argument("attach_mc_p_value: calibration table is for another test");
  }
  outcome.p_value = mc_p_value(cal, outcome.statistic);
  outcome.calibration = Calibration::kMonteCarlo;
  return outcome;
}

TestOutcome evaluate_test(TestId test, std::span<const double> values, const NullCalibration* cal,
                          const std::optional<MixtureParams>& lr_params) {
  TestOutcome outcome{};
  switch (test) {
    case TestId::kChiSquared:
      return chi_squared_test(values).outcome;
    case TestId::kExtremes:
      return extremes_test(values).outcome;
    case TestId::kHC:
      outcome = higher_criticism(values);
      break;
    case TestId::kLR: {
      const auto& params = cal && cal->lr_params ? cal->lr_params : lr_params;
      check_lr_params(params, "evaluate_test");
      outcome = {TestId::kLR, log_likelihood_ratio(values, *params), std::nullopt,
                 Calibration::kNone};
      break;
    }
  }
  if (cal) {
    if (cal->n != static_cast<std::int64_t>(values.size())) {
      throw std::invalid_argument("evaluate_test: calibration table is for n=" +
                                  std::to_string(cal->n) + ", sample has n=" +
                                  std::to_string(values.size()));
    }
    outcome = attach_mc_p_value(outcome, *cal);
  }
  return outcome;
}

PowerEstimate wilson_estimate(std::size_t rejections, std::size_t reps, double alpha) {
  if (reps == 0 || rejections > reps) {
    throw std::invalid_argument("wilson_estimate: need 0 <= rejections <= reps, reps > 0");
  }
  constexpr double z = 1.959963984540054;
  const double m = static_cast<double>(reps);
  const double p = static_cast<double>(rejections) / m;
  const double denom = 1.0 + z * z / m;
  const double centre = (p + z * z / (2.0 * m)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / m + z * z / (4.0 * m * m)) / denom;
  return {rejections, reps, alpha, p, std::clamp(centre - half, 0.0, p),
          std::clamp(centre + half, p, 1.0)};
}

PowerEstimate empirical_power(TestId test, const MixtureParams& alternative, std::int64_t n,
                              std::size_t reps, double alpha, std::uint64_t base_seed,
                              const NullCalibration* cal, unsigned threads) {
  if (n < 1 || reps < 1) throw std::invalid_argument("empirical_power: need n >= 1, reps >= 1");
  check_level(alpha);
  check_cal(test, n, cal, "empirical_power");
  const std::size_t rejections = count_rejections(test, alternative, n, reps, alpha, base_seed,
                                                  Phase::kPower, cal, threads);
  return wilson_estimate(rejections, reps, alpha);
}

PowerEstimate empirical_power(TestId test, const RegimeSpec& spec, std::int64_t n,
                              std::size_t reps, double alpha, std::uint64_t base_seed,
                              const NullCalibration* cal, unsigned threads) {
  return empirical_power(test, resolve_regime(spec, n), n, reps, alpha, base_seed, cal, threads);
}

double estimate_type_one(TestId test, std::int64_t n, std::size_t reps, double alpha,
                         std::uint64_t base_seed, const NullCalibration* cal, unsigned threads) {
  check_level(alpha);
  check_cal(test, n, cal, "estimate_type_one");
  if (cal) {
    const auto& s = cal->sorted_stats;
    std::size_t rejected = 0;
    for (double stat : s) rejected += mc_p_value(*cal, stat) < alpha ? 1 : 0;
    return static_cast<double>(rejected) / static_cast<double>(s.size());
  }
  if (reps < 1) throw std::invalid_argument("estimate_type_one: reps must be >= 1");
  const std::size_t rejected = count_rejections(test, MixtureParams::null(), n, reps, alpha,
                                                base_seed, Phase::kRiskNull, nullptr, threads);
  return static_cast<double>(rejected) / static_cast<double>(reps);
}

double estimate_risk(TestId test, const MixtureParams& alternative, std::int64_t n,
                     std::size_t reps, double alpha, std::uint64_t base_seed,
                     const NullCalibration* cal, unsigned threads) {
  const PowerEstimate power =
      empirical_power(test, alternative, n, reps, alpha, base_seed, cal, threads);
  const double type_one = estimate_type_one(test, n, reps, alpha, base_seed, cal, threads);
  return type_one + (1.0 - power.power);
}

void save_calibration(const NullCalibration& cal, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << "svcm-calibration 1\n";
  out << "generator " << kGeneratorId << "\n";
  out << "test " << to_string(cal.test) << "\n";
  out << "n " << cal.n << "\n";
  out << "replicates " << cal.replicates() << "\n";
  out << "seed " << cal.base_seed << "\n";
  if (cal.lr_params) {
    out << "epsilon " << hexfloat(cal.lr_params->epsilon()) << "\n";
    out << "sigma " << hexfloat(cal.lr_params->sigma()) << "\n";
  }
  out << "values\n";
  for (double v : cal.sorted_stats) out << hexfloat(v) << "\n";
  out.flush();
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

NullCalibration load_calibration(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open calibration file '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line) || line != "svcm-calibration 1") {
    throw std::runtime_error(path.string() + ": not a version-1 calibration file");
  }
  NullCalibration cal;
  std::optional<double> eps, sigma;
  std::size_t replicates = 0;
  bool have_values = false;
  while (std::getline(in, line)) {
    if (line == "values") {
      have_values = true;
      break;
    }
    std::istringstream fields(line);
    std::string key, value;
    fields >> key >> value;
    if (key == "generator") {
      if (value != kGeneratorId) {
        throw std::runtime_error(path.string() + ": table was built with generator '" + value +
                                 "', this build uses '" + std::string(kGeneratorId) + "'");
      }
    } else if (key == "test") {
      cal.test = parse_test_id(value);
    } else if (key == "n") {
      cal.n = std::stoll(value);
    } else if (key == "replicates") {
      replicates = std::stoull(value);
    } else if (key == "seed") {
      cal.base_seed = std::stoull(value);
    } else if (key == "epsilon") {
      eps = parse_double(value, path);
    } else if (key == "sigma") {
      sigma = parse_double(value, path);
    } else {
      throw std::runtime_error(path.string() + ": unknown header key '" + key + "'");
    }
  }
  if (!have_values) throw std::runtime_error(path.string() + ": missing 'values' section");
  if (eps && sigma) cal.lr_params = MixtureParams(*eps, *sigma);
  cal.sorted_stats.reserve(replicates);
  while (std::getline(in, line)) {
    if (!line.empty()) cal.sorted_stats.push_back(parse_double(line, path));
  }
  if (cal.sorted_stats.size() != replicates) {
    throw std::runtime_error(path.string() + ": expected " + std::to_string(replicates) +
                             " values, found " + std::to_string(cal.sorted_stats.size()));
  }
  if (!std::is_sorted(cal.sorted_stats.begin(), cal.sorted_stats.end())) {
    throw std::runtime_error(path.string() + ": values are not sorted");
  }
  return cal;
}

CalibrationCache::CalibrationCache(std::filesystem::path directory)
    : directory_(std::move(directory)) {
  std::filesystem::create_directories(directory_);
}

std::filesystem::path CalibrationCache::path_for(
    TestId test, std::int64_t n, std::size_t replicates, std::uint64_t base_seed,
    const std::optional<MixtureParams>& lr_params) const {
  char name[256];
  if (test == TestId::kLR && lr_params) {
    std::snprintf(name, sizeof name, "%s-n%" PRId64 "-B%zu-seed%" PRIu64 "-e%016" PRIx64
                  "-s%016" PRIx64 ".cal",
                  std::string(to_string(test)).c_str(), n, replicates, base_seed,
                  std::bit_cast<std::uint64_t>(lr_params->epsilon()),
                  std::bit_cast<std::uint64_t>(lr_params->sigma()));
  } else {
    std::snprintf(name, sizeof name, "%s-n%" PRId64 "-B%zu-seed%" PRIu64 ".cal",
                  std::string(to_string(test)).c_str(), n, replicates, base_seed);
  }
  return directory_ / name;
}

NullCalibration CalibrationCache::get_or_compute(TestId test, std::int64_t n,
                                                 std::size_t replicates, std::uint64_t base_seed,
                                                 std::optional<MixtureParams> lr_params,
                                                 unsigned threads) {
  if (test != TestId::kLR) lr_params.reset();
  const auto path = path_for(test, n, replicates, base_seed, lr_params);
  if (std::filesystem::exists(path)) {
    try {
      NullCalibration cached = load_calibration(path);
      if (cached.test == test && cached.n == n && cached.replicates() == replicates &&
          cached.base_seed == base_seed && cached.lr_params == lr_params) {
        ++hits_;
        return cached;
      }
    } catch (const std::exception&) {
      // Stale or foreign file: recompute and overwrite below.
    }
  }
  NullCalibration cal = calibrate_null(test, n, replicates, base_seed, lr_params, threads);
  save_calibration(cal, path);
  return cal;
}

}  // namespace svcm
