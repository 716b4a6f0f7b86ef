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

// Null calibration by simulation, Monte Carlo p-values, and empirical power
// and risk estimation.
//
// Replicate j of any phase draws from the stream
// derive_stream_seed(base_seed, test_tag(test), phase, j), so every result is
// a pure function of its inputs regardless of the thread count.

#ifndef SVCM_MONTECARLO_HPP_
#define SVCM_MONTECARLO_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "svcm/model.hpp"
#include "svcm/numerics.hpp"
#include "svcm/statistics.hpp"

namespace svcm {

inline constexpr std::size_t kMinCalibrationReplicates = 100;

std::uint64_t test_tag(TestId test) noexcept;

struct NullCalibration {
  TestId test = TestId::kHC;
  std::int64_t n = 0;
  std::uint64_t base_seed = 0;
  // Parameters the LR statistic is evaluated at; empty for the other tests.
  std::optional<MixtureParams> lr_params;
  std::vector<double> sorted_stats;  // ascending

  std::size_t replicates() const noexcept { return sorted_stats.size(); }
};

/// The statistic used for calibration and power: log LR, H, |W - n| or
/// -log p_bonferroni. `values` is used as scratch. lr_params is required for
/// TestId::kLR and ignored otherwise.
double compute_statistic(TestId test, std::span<double> values,
                         const std::optional<MixtureParams>& lr_params);

/// B null samples of size n, statistic on each, sorted. Rejects B < 100 and
/// LR without valid alternative parameters.
NullCalibration calibrate_null(TestId test, std::int64_t n, std::size_t replicates,
                               std::uint64_t base_seed,
                               std::optional<MixtureParams> lr_params = std::nullopt,
                               unsigned threads = 0);

/// (1 + #{stats >= observed}) / (B + 1).
Probability mc_p_value(const NullCalibration& cal, double observed);

/// Copies `outcome` with the Monte Carlo p-value filled in.
TestOutcome attach_mc_p_value(TestOutcome outcome, const NullCalibration& cal);

/// Full outcome of `test` on `values`: closed-form p for chi-squared and
/// extremes, Monte Carlo p for LR and HC when `cal` is given.
TestOutcome evaluate_test(TestId test, std::span<const double> values,
                          const NullCalibration* cal,
                          const std::optional<MixtureParams>& lr_params = std::nullopt);

struct PowerEstimate {
  std::size_t rejections = 0;
  std::size_t reps = 0;
  double alpha = 0.05;
  double power = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

/// Wilson score 95% interval for rejections / reps.
PowerEstimate wilson_estimate(std::size_t rejections, std::size_t reps, double alpha);

/// Fraction of `reps` samples from `alternative` whose p-value is below alpha.
/// `cal` must be given exactly for the Monte Carlo calibrated tests (LR, HC).
PowerEstimate empirical_power(TestId test, const MixtureParams& alternative, std::int64_t n,
                              std::size_t reps, double alpha, std::uint64_t base_seed,
                              const NullCalibration* cal, unsigned threads = 0);

PowerEstimate empirical_power(TestId test, const RegimeSpec& spec, std::int64_t n,
                              std::size_t reps, double alpha, std::uint64_t base_seed,
                              const NullCalibration* cal, unsigned threads = 0);

/// Estimated Type I error at the test's threshold.
double estimate_type_one(TestId test, std::int64_t n, std::size_t reps, double alpha,
                         std::uint64_t base_seed, const NullCalibration* cal,
                         unsigned threads = 0);

/// Type I + Type II error. With a calibration table the Type I part reuses
/// it; closed-form tests simulate `reps` null samples instead.
double estimate_risk(TestId test, const MixtureParams& alternative, std::int64_t n,
                     std::size_t reps, double alpha, std::uint64_t base_seed,
                     const NullCalibration* cal, unsigned threads = 0);

// Persistence. The text format stores every statistic as a hexfloat, so a
// loaded table is bit-identical to the one saved.
void save_calibration(const NullCalibration& cal, const std::filesystem::path& path);
NullCalibration load_calibration(const std::filesystem::path& path);

/// Directory of persisted tables keyed by (test, n, B, seed, LR params,
/// generator). A hit returns exactly what recomputation would.
class CalibrationCache {
 public:
  explicit CalibrationCache(std::filesystem::path directory);

  const std::filesystem::path& directory() const noexcept { return directory_; }
  std::filesystem::path path_for(TestId test, std::int64_t n, std::size_t replicates,
                                 std::uint64_t base_seed,
                                 const std::optional<MixtureParams>& lr_params) const;

  NullCalibration get_or_compute(TestId test, std::int64_t n, std::size_t replicates,
                                 std::uint64_t base_seed,
                                 std::optional<MixtureParams> lr_params = std::nullopt,
                                 unsigned threads = 0);

  std::size_t hits() const noexcept { return hits_; }

 private:
  std::filesystem::path directory_;
  std::size_t hits_ = 0;
};

}  // namespace svcm

#endif  // SVCM_MONTECARLO_HPP_
