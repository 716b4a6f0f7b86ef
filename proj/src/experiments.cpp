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

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "svcm/theory.hpp"

namespace svcm {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) return parts;
    start = pos + 1;
  }
}

double to_double(const std::string& text, std::string_view key) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw std::invalid_argument(std::string(key) + ": not a number: '" + text + "'");
  }
  return v;
}

std::uint64_t to_uint(const std::string& text, std::string_view key) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
    throw std::invalid_argument(std::string(key) + ": not a nonnegative integer: '" + text + "'");
  }
  return std::stoull(text);
}

std::string format_g6(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

const char* kColours[] = {"#1b9e77", "#d95f02", "#7570b3", "#e7298a"};

}  // namespace

void ScenarioConfig::validate() const {
  if (grid.empty()) throw std::invalid_argument("scenario '" + name + "': grid is empty");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw std::invalid_argument("scenario '" + name + "': grid must be strictly increasing");
    }
  }
  if (tests.empty()) throw std::invalid_argument("scenario '" + name + "': no tests selected");
  for (std::size_t i = 0; i < tests.size(); ++i) {
    if (std::count(tests.begin(), tests.end(), tests[i]) > 1) {
      throw std::invalid_argument("scenario '" + name + "': test listed twice");
    }
  }
  if (n < 1 || reps < 1) throw std::invalid_argument("scenario '" + name + "': n, reps >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("scenario '" + name + "': alpha must lie in (0, 1)");
  }
  if (calibration_replicates < kMinCalibrationReplicates) {
    throw std::invalid_argument("scenario '" + name + "': B must be >= 100");
  }
  if (name.find(',') != std::string::npos) {
    throw std::invalid_argument("scenario name must not contain ','");
  }
  for (double coordinate : grid) {
    try {
      regime_at(coordinate);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("scenario '" + name + "' grid point " + format_g6(coordinate) +
                                  ": " + e.what());
    }
  }
}

RegimeSpec ScenarioConfig::regime_at(double coordinate) const {
  switch (kind) {
    case RegimeKind::kNearZero:
      return RegimeSpec::near_zero(beta, coordinate);
    case RegimeKind::kNearOne:
      return RegimeSpec::near_one(beta, coordinate, side);
    case RegimeKind::kFixed:
      break;
  }
  return RegimeSpec::fixed(beta, coordinate);
}

ScenarioConfig preset(std::string_view name) {
  ScenarioConfig c;
  c.name = std::string(name);
  if (name == "A") {
    c.kind = RegimeKind::kNearZero;
    c.beta = 0.6;
    c.grid = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 1.0, 1.2};
  } else if (name == "B") {
    c.kind = RegimeKind::kFixed;
    c.beta = 0.4;
    c.grid = {0.25, 0.5, 0.75, 0.9, 1.1, 1.25, 1.5, 2.0, 3.0};
  } else if (name == "C") {
    c.kind = RegimeKind::kNearOne;
    c.beta = 0.4;
    c.side = Side::kAbove;
    c.grid = {0.02, 0.05, 0.075, 0.1, 0.125, 0.15, 0.2, 0.3};
  } else if (name == "D") {
    c.kind = RegimeKind::kFixed;
    c.beta = 0.6;
    c.grid = {1.2, 1.5, 2.0, 2.5, 3.0, 3.5};
  } else {
    throw std::invalid_argument("unknown preset '" + std::string(name) + "' (expected A-D)");
  }
  return c;
}

void apply_full_scale(ScenarioConfig& config) {
  config.n = 100000;
  config.calibration_replicates = 10000;
}

std::map<std::string, std::string> read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path.string() + "'");
  std::map<std::string, std::string> entries;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                               ": expected key=value");
    }
    entries[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return entries;
}

void apply_config(ScenarioConfig& c, const std::map<std::string, std::string>& entries) {
  for (const auto& [key, value] : entries) {
    if (key == "name") {
      c.name = value;
    } else if (key == "regime") {
      c.kind = parse_regime_kind(value);
    } else if (key == "beta") {
      c.beta = to_double(value, key);
    } else if (key == "side") {
      c.side = parse_side(value);
    } else if (key == "grid") {
      c.grid.clear();
      for (const auto& part : split(value, ',')) c.grid.push_back(to_double(part, key));
    } else if (key == "n") {
      c.n = static_cast<std::int64_t>(to_uint(value, key));
    } else if (key == "reps") {
      c.reps = to_uint(value, key);
    } else if (key == "B") {
      c.calibration_replicates = to_uint(value, key);
    } else if (key == "alpha") {
      c.alpha = to_double(value, key);
    } else if (key == "seed") {
      c.seed = to_uint(value, key);
    } else if (key == "tests") {
      c.tests.clear();
      for (const auto& part : split(value, ',')) c.tests.push_back(parse_test_id(part));
    } else if (key == "threads") {
      c.threads = static_cast<unsigned>(to_uint(value, key));
    } else if (key == "full_scale") {
      if (value == "true" || value == "1") apply_full_scale(c);
    } else if (key != "preset") {
      throw std::invalid_argument("unknown config key '" + key + "'");
    }
  }
}

std::vector<ResultRow> run_scenario(const ScenarioConfig& config, CalibrationCache* cache) {
  config.validate();
  std::vector<MixtureParams> params;
  params.reserve(config.grid.size());
  for (double coordinate : config.grid) {
    try {
      params.push_back(resolve_regime(config.regime_at(coordinate), config.n));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("scenario '" + config.name + "' grid point " +
                                  format_g6(coordinate) + ": " + e.what());
    }
  }

  auto calibrate = [&](TestId test, std::optional<MixtureParams> lr) {
    if (cache) {
      return cache->get_or_compute(test, config.n, config.calibration_replicates, config.seed,
                                   lr, config.threads);
    }
    return calibrate_null(test, config.n, config.calibration_replicates, config.seed, lr,
                          config.threads);
  };

  std::vector<ResultRow> rows;
  rows.reserve(config.tests.size() * config.grid.size());
  for (TestId test : config.tests) {
    std::optional<NullCalibration> shared;
    if (test == TestId::kHC) shared = calibrate(test, std::nullopt);
    for (std::size_t k = 0; k < config.grid.size(); ++k) {
      const MixtureParams& alt = params[k];
      PowerEstimate est;
      if (test == TestId::kLR) {
        if (alt.is_null_law()) {
          // log L is identically 0 here: every null entry ties, p = 1.
          est = wilson_estimate(0, config.reps, config.alpha);
        } else {
          const NullCalibration cal = calibrate(test, alt);
          est = empirical_power(test, alt, config.n, config.reps, config.alpha, config.seed, &cal,
                                config.threads);
        }
      } else {
        est = empirical_power(test, alt, config.n, config.reps, config.alpha, config.seed,
                              shared ? &*shared : nullptr, config.threads);
      }
      rows.push_back({config.name, test, config.grid[k], est.power, est.ci_low, est.ci_high,
                      detection_boundary(test, config.regime_at(config.grid[k])), config.n,
                      config.reps, config.alpha, config.seed});
    }
  }
  return rows;
}

void emit_csv(std::span<const ResultRow> rows, std::ostream& out) {
  out << kCsvHeader << "\n";
  for (const auto& r : rows) {
    out << r.scenario << ',' << to_string(r.test) << ',' << format_g6(r.coordinate) << ','
        << format_g6(r.power) << ',' << format_g6(r.ci_low) << ',' << format_g6(r.ci_high) << ','
        << (r.boundary ? format_g6(*r.boundary) : std::string()) << ',' << r.n << ',' << r.reps
        << ',' << format_g6(r.alpha) << ',' << r.seed << "\n";
  }
}

void emit_csv(std::span<const ResultRow> rows, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  emit_csv(rows, out);
  out.flush();
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

std::vector<ResultRow> parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw std::runtime_error("parse_csv: missing or unexpected header");
  }
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 11) throw std::runtime_error("parse_csv: expected 11 fields: " + line);
    ResultRow r;
    r.scenario = f[0];
    r.test = parse_test_id(f[1]);
    r.coordinate = to_double(f[2], "coordinate");
    r.power = to_double(f[3], "power");
    r.ci_low = to_double(f[4], "ci_low");
    r.ci_high = to_double(f[5], "ci_high");
    if (!f[6].empty()) r.boundary = to_double(f[6], "boundary");
    r.n = static_cast<std::int64_t>(to_uint(f[7], "n"));
    r.reps = to_uint(f[8], "reps");
    r.alpha = to_double(f[9], "alpha");
    r.seed = to_uint(f[10], "seed");
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_svg(std::span<const ResultRow> rows, std::ostream& out) {
  constexpr double kWidth = 640, kHeight = 420, kLeft = 60, kRight = 150, kTop = 30,
                   kBottom = 50;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  double lo = 0.0, hi = 1.0;
  if (!rows.empty()) {
    lo = hi = rows.front().coordinate;
    for (const auto& r : rows) {
      lo = std::min(lo, r.coordinate);
      hi = std::max(hi, r.coordinate);
      if (r.boundary) {
        lo = std::min(lo, *r.boundary);
        hi = std::max(hi, *r.boundary);
      }
    }
    if (hi == lo) hi = lo + 1.0;
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
  auto px = [&](double x) { return kLeft + (x - lo) / (hi - lo) * plot_w; };
  auto py = [&](double p) { return kTop + (1.0 - p) * plot_h; };

  out << std::fixed << std::setprecision(2);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  const std::string title = rows.empty() ? "empty" : rows.front().scenario;
  out << "<text x=\"" << kLeft << "\" y=\"18\">scenario " << title << "</text>\n";
  out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w
      << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double p = i / 4.0;
    out << "<text x=\"" << kLeft - 8 << "\" y=\"" << py(p) + 4
        << "\" text-anchor=\"end\">" << format_g6(p) << "</text>\n";
    const double x = lo + (hi - lo) * i / 4.0;
    out << "<text x=\"" << px(x) << "\" y=\"" << kTop + plot_h + 18
        << "\" text-anchor=\"middle\">" << format_g6(x) << "</text>\n";
  }
  out << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 10
      << "\" text-anchor=\"middle\">coordinate</text>\n";
  if (!rows.empty()) {
    const double alpha = rows.front().alpha;
    out << "<line x1=\"" << kLeft << "\" y1=\"" << py(alpha) << "\" x2=\"" << kLeft + plot_w
        << "\" y2=\"" << py(alpha) << "\" class=\"level\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
  }
  std::vector<TestId> order;
  for (const auto& r : rows) {
    if (std::find(order.begin(), order.end(), r.test) == order.end()) order.push_back(r.test);
  }
  std::vector<double> boundaries;
  for (const auto& r : rows) {
    if (r.boundary && std::find(boundaries.begin(), boundaries.end(), *r.boundary) ==
                          boundaries.end()) {
      boundaries.push_back(*r.boundary);
    }
  }
  for (double b : boundaries) {
    out << "<line x1=\"" << px(b) << "\" y1=\"" << kTop << "\" x2=\"" << px(b) << "\" y2=\""
        << kTop + plot_h << "\" class=\"boundary\" stroke=\"black\" stroke-dasharray=\"2 2\"/>\n";
  }
  for (std::size_t t = 0; t < order.size(); ++t) {
    const char* colour = kColours[static_cast<std::size_t>(order[t]) % 4];
    out << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\" points=\"";
    for (const auto& r : rows) {
      if (r.test == order[t]) out << px(r.coordinate) << ',' << py(r.power) << ' ';
    }
    out << "\"/>\n";
    for (const auto& r : rows) {
      if (r.test != order[t]) continue;
      out << "<line x1=\"" << px(r.coordinate) << "\" y1=\"" << py(r.ci_low) << "\" x2=\""
          << px(r.coordinate) << "\" y2=\"" << py(r.ci_high) << "\" stroke=\"" << colour
          << "\"/>\n";
    }
    const double ly = kTop + 16.0 * static_cast<double>(t + 1);
    out << "<line x1=\"" << kLeft + plot_w + 15 << "\" y1=\"" << ly << "\" x2=\""
        << kLeft + plot_w + 35 << "\" y2=\"" << ly << "\" stroke=\"" << colour
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << kLeft + plot_w + 40 << "\" y=\"" << ly + 4 << "\">"
        << to_string(order[t]) << "</text>\n";
  }
  out << "</svg>\n";
}

void write_svg(std::span<const ResultRow> rows, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  write_svg(rows, out);
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

}  // namespace svcm
