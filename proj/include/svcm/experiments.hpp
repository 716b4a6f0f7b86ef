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

// Power-curve scenarios: the four preset panels, arbitrary grids, and CSV /
// SVG emission.

#ifndef SVCM_EXPERIMENTS_HPP_
#define SVCM_EXPERIMENTS_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "svcm/model.hpp"
#include "svcm/montecarlo.hpp"
#include "svcm/statistics.hpp"

namespace svcm {

struct ScenarioConfig {
  std::string name = "custom";
  RegimeKind kind = RegimeKind::kFixed;
  double beta = 0.6;
  Side side = Side::kAbove;      // near-one only
  std::vector<double> grid;      // gamma, or sigma for the fixed regime
  std::int64_t n = 10000;
  std::size_t reps = 200;
  double alpha = 0.05;
  std::size_t calibration_replicates = 2000;
  std::uint64_t seed = 0;
  std::vector<TestId> tests{std::begin(kAllTests), std::end(kAllTests)};
  unsigned threads = 0;

  /// Throws std::invalid_argument on an empty or non-monotone grid, an empty
  /// or repeated test list, or out-of-range scalars.
  void validate() const;

  RegimeSpec regime_at(double coordinate) const;
};

/// Preset "A".."D" at desk scale (n = 10^4, B = 2000, 200 reps).
///   A: beta 0.6, near-zero, gamma grid
///   B: beta 0.4, fixed sigma grid on both sides of 1
///   C: beta 0.4, near-one (above), gamma grid
///   D: beta 0.6, fixed sigma > 1 grid
ScenarioConfig preset(std::string_view name);

/// n = 10^5 and B = 10^4 null replicates.
void apply_full_scale(ScenarioConfig& config);

/// key=value lines, '#' starts a comment. Keys: name regime beta side grid n
/// reps B alpha seed tests threads full_scale.
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);
void apply_config(ScenarioConfig& config, const std::map<std::string, std::string>& entries);

struct ResultRow {
  std::string scenario;
  TestId test = TestId::kHC;
  double coordinate = 0.0;
  double power = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::optional<double> boundary;
  std::int64_t n = 0;
  std::size_t reps = 0;
  double alpha = 0.0;
  std::uint64_t seed = 0;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

/// One row per (test, grid point), ordered by test then grid index. Null
/// tables for HC are computed once; LR is recalibrated at every grid point.
/// If `cache` is given, tables are read from / written to it.
std::vector<ResultRow> run_scenario(const ScenarioConfig& config,
                                    CalibrationCache* cache = nullptr);

inline constexpr std::string_view kCsvHeader =
    "scenario,test,coordinate,power,ci_low,ci_high,boundary,n,reps,alpha,seed";

void emit_csv(std::span<const ResultRow> rows, std::ostream& out);
void emit_csv(std::span<const ResultRow> rows, const std::filesystem::path& path);
std::vector<ResultRow> parse_csv(std::istream& in);

/// Power against coordinate with Wilson error bars, a vertical line at the
/// detection boundary and a horizontal line at the level.
void write_svg(std::span<const ResultRow> rows, std::ostream& out);
void write_svg(std::span<const ResultRow> rows, const std::filesystem::path& path);

}  // namespace svcm

#endif  // SVCM_EXPERIMENTS_HPP_
