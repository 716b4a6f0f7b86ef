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

// Test-only reference computations, independent of the library code paths
// they check.

#ifndef SVCM_TESTS_ORACLES_HPP_
#define SVCM_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace svcm::testing {

/// Kolmogorov-Smirnov distance between the empirical law of `xs` and `cdf`.
inline double ks_distance(std::vector<double> xs, const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double m = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, static_cast<double>(i + 1) / m - f, f - static_cast<double>(i) / m});
  }
  return d;
}

/// sqrt(n) |F - Psi(x)| / sqrt(Psi(x) (1 - Psi(x))), straight from the
/// definition with the standard library's erf/erfc.
inline double hc_supremand(double x, double f, double n) {
  const double psi = std::erf(x / std::sqrt(2.0));
  const double tail = std::erfc(x / std::sqrt(2.0));
  if (psi == 0.0) return 0.0;
  return std::sqrt(n) * std::fabs(f - psi) / std::sqrt(psi * tail);
}

struct HcGridResult {
  double grid_only;   // max over the uniform grid
  double with_jumps;  // also at both one-sided limits of each sample point
};

/// Brute-force maximization of the HC supremand over `points` evenly spaced
/// x in [0, max|x| + 1]. F_n is obtained by counting.
inline HcGridResult hc_grid_bruteforce(std::span<const double> values, std::size_t points) {
  std::vector<double> a;
  for (double v : values) a.push_back(std::fabs(v));
  std::sort(a.begin(), a.end());
  const double n = static_cast<double>(a.size());
  const double hi = a.back() + 1.0;
  HcGridResult r{0.0, 0.0};
  std::size_t below = 0;  // #{a <= x}, advanced monotonically
  for (std::size_t k = 1; k < points; ++k) {
    const double x = hi * static_cast<double>(k) / static_cast<double>(points - 1);
    while (below < a.size() && a[below] <= x) ++below;
    r.grid_only = std::max(r.grid_only, hc_supremand(x, static_cast<double>(below) / n, n));
  }
  r.with_jumps = r.grid_only;
  for (double x : a) {
    const auto le = std::upper_bound(a.begin(), a.end(), x) - a.begin();
    const auto lt = std::lower_bound(a.begin(), a.end(), x) - a.begin();
    r.with_jumps = std::max({r.with_jumps, hc_supremand(x, static_cast<double>(le) / n, n),
                             hc_supremand(x, static_cast<double>(lt) / n, n)});
  }
  return r;
}

}  // namespace svcm::testing

#endif  // SVCM_TESTS_ORACLES_HPP_
