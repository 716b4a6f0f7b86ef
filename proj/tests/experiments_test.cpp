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

#include "svcm/experiments.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "gtest/gtest.h"
#include "svcm/theory.hpp"

namespace svcm {
namespace {

namespace fs = std::filesystem;

ScenarioConfig small(std::string_view name) {
  ScenarioConfig c = preset(name);
  c.n = 100;
  c.reps = 20;
  c.calibration_replicates = 200;
  c.seed = 3;
  return c;
}

std::string csv_of(std::span<const ResultRow> rows) {
  std::ostringstream out;
  emit_csv(rows, out);
  return out.str();
}

TEST(PresetTest, Definitions) {
  const auto a = preset("A");
  EXPECT_EQ(a.kind, RegimeKind::kNearZero);
  EXPECT_EQ(a.beta, 0.6);
  EXPECT_EQ(a.grid.size(), 10u);
  const auto b = preset("B");
  EXPECT_EQ(b.kind, RegimeKind::kFixed);
  EXPECT_EQ(b.beta, 0.4);
  EXPECT_LT(b.grid.front(), 1.0);
  EXPECT_GT(b.grid.back(), 1.0);
  const auto c = preset("C");
  EXPECT_EQ(c.kind, RegimeKind::kNearOne);
  EXPECT_EQ(c.side, Side::kAbove);
  const auto d = preset("D");
  EXPECT_EQ(d.beta, 0.6);
  for (double s : d.grid) EXPECT_GT(s, 1.0);
  for (const auto& p : {a, b, c, d}) {
    EXPECT_EQ(p.n, 10000);
    EXPECT_EQ(p.reps, 200u);
    EXPECT_EQ(p.calibration_replicates, 2000u);
    EXPECT_NO_THROW(p.validate());
  }
  EXPECT_THROW(preset("E"), std::invalid_argument);
  ScenarioConfig big = preset("A");
  apply_full_scale(big);
  EXPECT_EQ(big.n, 100000);
  EXPECT_EQ(big.calibration_replicates, 10000u);
}

TEST(ValidateTest, RejectsBadConfigurations) {
  auto bad = [](auto mutate) {
    ScenarioConfig c = preset("D");
    mutate(c);
    return c;
  };
  EXPECT_THROW(bad([](auto& c) { c.grid.clear(); }).validate(), std::invalid_argument);
  EXPECT_THROW(bad([](auto& c) { c.grid = {2.0, 1.5}; }).validate(), std::invalid_argument);
  EXPECT_THROW(bad([](auto& c) { c.tests.clear(); }).validate(), std::invalid_argument);
  EXPECT_THROW(bad([](auto& c) { c.tests = {TestId::kHC, TestId::kHC}; }).validate(),
               std::invalid_argument);
  EXPECT_THROW(bad([](auto& c) { c.alpha = 0.0; }).validate(), std::invalid_argument);
  EXPECT_THROW(bad([](auto& c) { c.calibration_replicates = 50; }).validate(),
               std::invalid_argument);
  EXPECT_THROW(bad([](auto& c) { c.name = "a,b"; }).validate(), std::invalid_argument);
  EXPECT_THROW(bad([](auto& c) { c.beta = 1.0; }).validate(), std::invalid_argument);
}

TEST(RunScenarioTest, ShrunkPresetHasOneRowPerTestAndPoint) {
  const auto cfg = small("B");
  const auto rows = run_scenario(cfg);
  ASSERT_EQ(rows.size(), 36u);
  for (std::size_t t = 0; t < 4; ++t) {
    for (std::size_t k = 0; k < cfg.grid.size(); ++k) {
      const auto& r = rows[t * cfg.grid.size() + k];
      EXPECT_EQ(r.test, kAllTests[t]);
      EXPECT_EQ(r.coordinate, cfg.grid[k]);
      EXPECT_EQ(r.n, 100);
      EXPECT_EQ(r.reps, 20u);
      EXPECT_LE(r.ci_low, r.power);
      EXPECT_LE(r.power, r.ci_high);
      EXPECT_EQ(r.boundary, detection_boundary(r.test, cfg.regime_at(r.coordinate)));
    }
  }
}

TEST(RunScenarioTest, NullGridPointRejectsAtLevel) {
  ScenarioConfig cfg;
  cfg.name = "null";
  cfg.beta = 0.5;
  cfg.grid = {1.0};
  cfg.n = 1000;
  cfg.reps = 400;
  cfg.calibration_replicates = 1000;
  cfg.seed = 11;
  const auto rows = run_scenario(cfg);
  ASSERT_EQ(rows.size(), 4u);
  for (const auto& r : rows) {
    if (r.test == TestId::kLR) {
      EXPECT_EQ(r.power, 0.0);
    } else {
      EXPECT_NEAR(r.power, 0.05, 0.035) << to_string(r.test);
    }
  }
}

TEST(RunScenarioTest, IndependentOfThreadCount) {
  auto cfg = small("A");
  cfg.grid = {0.3, 0.8};
  cfg.threads = 1;
  const auto one = run_scenario(cfg);
  cfg.threads = 4;
  EXPECT_EQ(csv_of(run_scenario(cfg)), csv_of(one));
}

TEST(RunScenarioTest, CacheDoesNotChangeResults) {
  const fs::path dir = fs::temp_directory_path() / "svcm_exp_cache";
  fs::remove_all(dir);
  auto cfg = small("C");
  cfg.grid = {0.05, 0.2};
  const auto plain = run_scenario(cfg);
  CalibrationCache cache(dir);
  EXPECT_EQ(run_scenario(cfg, &cache), plain);
  EXPECT_EQ(cache.hits(), 0u);
  EXPECT_EQ(run_scenario(cfg, &cache), plain);
  EXPECT_EQ(cache.hits(), 3u);  // one HC table, two LR tables
}

TEST(RunScenarioTest, InvalidGridPointNamesTheCoordinate) {
  ScenarioConfig cfg;
  cfg.kind = RegimeKind::kNearOne;
  cfg.side = Side::kBelow;
  cfg.beta = 0.4;
  cfg.grid = {-0.1, 0.1};
  cfg.n = 100;
  cfg.reps = 5;
  cfg.calibration_replicates = 100;
  try {
    run_scenario(cfg);
    FAIL() << "expected invalid_argument";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("grid point -0.1"), std::string::npos) << e.what();
  }
}

TEST(PresetBoundaryTest, FixedPastTheSquareRootLevel) {
  const auto cfg = preset("D");
  for (TestId test : {TestId::kLR, TestId::kHC, TestId::kExtremes}) {
    const auto b = detection_boundary(test, cfg.regime_at(2.0));
    ASSERT_TRUE(b.has_value());
    EXPECT_NEAR(*b, 1.5811388300841898, 1e-12);
  }
  const auto chi = cfg.regime_at(2.0);
  EXPECT_FALSE(detection_boundary(TestId::kChiSquared, chi).has_value());
  EXPECT_EQ(classify(TestId::kChiSquared, chi).verdict, Verdict::kUndetectable);
}

TEST(CsvTest, EmptyRowSetIsHeaderOnly) {
  EXPECT_EQ(csv_of({}), std::string(kCsvHeader) + "\n");
  std::istringstream in(csv_of({}));
  EXPECT_TRUE(parse_csv(in).empty());
}

TEST(CsvTest, SingleRowRoundTrip) {
  const std::vector<ResultRow> rows{
      {"D", TestId::kHC, 2.5, 0.5, 0.43136, 0.568639, 1.58114, 10000, 200, 0.05, 7},
      {"D", TestId::kChiSquared, 2.5, 0.05, 0.0275, 0.09, std::nullopt, 10000, 200, 0.05, 7}};
  const std::string text = csv_of(rows);
  EXPECT_NE(text.find("D,hc,2.5,0.5,0.43136,0.568639,1.58114,10000,200,0.05,7"),
            std::string::npos);
  EXPECT_NE(text.find("D,chisq,2.5,0.05,0.0275,0.09,,10000,200,0.05,7"), std::string::npos);
  std::istringstream in(text);
  EXPECT_EQ(parse_csv(in), rows);
}

TEST(CsvTest, RandomRowsRoundTripThroughText) {
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<ResultRow> rows;
  for (int i = 0; i < 200; ++i) {
    const double lo = u(gen);
    std::optional<double> boundary;
    if (i % 3) boundary = 3.0 * u(gen);
    rows.push_back({"s" + std::to_string(i % 5), kAllTests[i % 4], 0.01 + 4 * u(gen), lo / 2 + 0.25,
                    lo / 2, lo / 2 + 0.5, boundary, 1 + i * 37, 1 + static_cast<std::size_t>(i),
                    0.01 + 0.5 * u(gen), static_cast<std::uint64_t>(i) * 1000003u});
  }
  const std::string text = csv_of(rows);
  std::istringstream in(text);
  const auto back = parse_csv(in);
  ASSERT_EQ(back.size(), rows.size());
  EXPECT_EQ(csv_of(back), text);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_NEAR(back[i].power, rows[i].power, 1e-5);
    EXPECT_EQ(back[i].boundary.has_value(), rows[i].boundary.has_value());
    EXPECT_EQ(back[i].seed, rows[i].seed);
  }
}

TEST(CsvTest, RejectsMalformedInput) {
  std::istringstream bad_header("a,b\n");
  EXPECT_THROW(parse_csv(bad_header), std::runtime_error);
  std::istringstream short_row(std::string(kCsvHeader) + "\nD,hc,1\n");
  EXPECT_THROW(parse_csv(short_row), std::runtime_error);
}

TEST(ConfigTest, FileOverridesPreset) {
  const fs::path path = fs::temp_directory_path() / "svcm_exp_config.txt";
  {
    std::ofstream out(path);
    out << "# comment\npreset = D\nname = mine\nregime = near-one\nside = below\n"
        << "beta = 0.3\ngrid = 0.1, 0.2\nn = 500\nreps = 10\nB = 300\nalpha = 0.1\n"
        << "seed = 42\ntests = hc,chisq\nthreads = 2\n";
  }
  const auto entries = read_config_file(path);
  EXPECT_EQ(entries.at("preset"), "D");
  ScenarioConfig c = preset(entries.at("preset"));
  apply_config(c, entries);
  EXPECT_EQ(c.name, "mine");
  EXPECT_EQ(c.kind, RegimeKind::kNearOne);
  EXPECT_EQ(c.side, Side::kBelow);
  EXPECT_EQ(c.beta, 0.3);
  EXPECT_EQ(c.grid, (std::vector<double>{0.1, 0.2}));
  EXPECT_EQ(c.n, 500);
  EXPECT_EQ(c.reps, 10u);
  EXPECT_EQ(c.calibration_replicates, 300u);
  EXPECT_EQ(c.alpha, 0.1);
  EXPECT_EQ(c.seed, 42u);
  EXPECT_EQ(c.tests, (std::vector<TestId>{TestId::kHC, TestId::kChiSquared}));
  EXPECT_EQ(c.threads, 2u);

  ScenarioConfig d = preset("D");
  EXPECT_THROW(apply_config(d, {{"bogus", "1"}}), std::invalid_argument);
  EXPECT_THROW(apply_config(d, {{"n", "-4"}}), std::invalid_argument);
  EXPECT_THROW(apply_config(d, {{"beta", "x"}}), std::invalid_argument);
  EXPECT_THROW(read_config_file(fs::temp_directory_path() / "svcm_missing_cfg"),
               std::runtime_error);
}

TEST(SvgTest, DrawsCurvesBoundaryAndLevel) {
  const auto rows = run_scenario(small("D"));
  std::ostringstream out;
  write_svg(rows, out);
  const std::string svg = out.str();
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  for (const char* name : {"lr", "chisq", "extremes", "hc"}) {
    EXPECT_NE(svg.find(name), std::string::npos) << name;
  }
  EXPECT_NE(svg.find("class=\"boundary\""), std::string::npos);
  EXPECT_NE(svg.find("class=\"level\""), std::string::npos);
}

}  // namespace
}  // namespace svcm
