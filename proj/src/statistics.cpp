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

#include "svcm/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace svcm {

namespace {

constexpr double kMaxStatistic = std::numeric_limits<double>::max();
// -log of the smallest positive double; the extremes statistic saturates here.
const double kMaxNegLogP = -std::log(std::numeric_limits<double>::denorm_min());

void require_nonempty(std::span<const double> values, const char* what) {
  if (values.empty()) throw std::invalid_argument(std::string(what) + ": sample is empty");
}

double saturating_exp(double log_value) {
  if (log_value >= std::log(kMaxStatistic)) return kMaxStatistic;
  return std::exp(log_value);
}

}  // namespace

std::string_view to_string(TestId test) {
  switch (test) {
    case TestId::kLR:
      return "lr";
    case TestId::kChiSquared:
      return "chisq";
    case TestId::kExtremes:
      return "extremes";
    case TestId::kHC:
      return "hc";
  }
  return "?";
}

TestId parse_test_id(std::string_view text) {
  for (TestId t : kAllTests) {
    if (text == to_string(t)) return t;
  }
  throw std::invalid_argument("unknown test '" + std::string(text) +
                              "' (expected lr, chisq, extremes or hc)");
}

std::string_view to_string(Calibration calibration) {
  switch (calibration) {
    case Calibration::kClosedForm:
      return "closed_form";
    case Calibration::kMonteCarlo:
      return "monte_carlo";
    case Calibration::kNone:
      return "none";
  }
  return "?";
}

double log_likelihood_ratio(std::span<const double> values, const MixtureParams& params) {
  const double eps = params.epsilon();
  const double sigma = params.sigma();
  if (!(eps > 0.0)) throw std::invalid_argument("log_likelihood_ratio: epsilon must be > 0");
  if (sigma == 1.0) {
    throw std::invalid_argument("log_likelihood_ratio: sigma == 1 is not an alternative");
  }
  const double a = std::log1p(-eps);
  const double b0 = std::log(eps / sigma);
  const double c = (sigma * sigma - 1.0) / (2.0 * sigma * sigma);
  double total = 0.0;
  for (double x : values) {
    const double b = b0 + c * x * x;
    total += std::max(a, b) + std::log1p(std::exp(-std::fabs(a - b)));
  }
  return total;
}

ChiSquaredResult chi_squared_test(std::span<const double> values) {
  require_nonempty(values, "chi_squared_test");
  const auto n = static_cast<std::int64_t>(values.size());
  const double nd = static_cast<double>(n);
  double w = 0.0;
  for (double x : values) w += x * x;
  const double d = std::fabs(w - nd);
  double p = chi_squared_sf(nd + d, n);
  if (nd - d > 0.0) p += chi_squared_cdf(nd - d, n);
  p = std::clamp(p, 0.0, 1.0);
  return {{TestId::kChiSquared, d, Probability(p), Calibration::kClosedForm}, w};
}

ExtremesResult extremes_test(std::span<const double> values) {
  require_nonempty(values, "extremes_test");
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (double x : values) {
    const double a = std::fabs(x);
    lo = std::min(lo, a);
    hi = std::max(hi, a);
  }
  const double nd = static_cast<double>(values.size());
  // 1 - (2 Phi-bar(m))^n and 1 - Psi(M)^n, both via expm1 of a log.
  const double p_min = lo == 0.0 ? 0.0 : -std::expm1(nd * log_folded_survival(lo));
  const double p_max = -std::expm1(nd * log_folded_cdf(hi));
  const double p_bonf = std::min(1.0, 2.0 * std::min(p_min, p_max));
  const double stat = p_bonf > 0.0 ? std::min(-std::log(p_bonf), kMaxNegLogP) : kMaxNegLogP;
  ExtremesDetail detail{lo, hi, Probability(std::clamp(p_min, 0.0, 1.0)),
                        Probability(std::clamp(p_max, 0.0, 1.0)), Probability(p_bonf)};
  return {{TestId::kExtremes, stat, detail.p_bonferroni, Calibration::kClosedForm}, detail};
}

double higher_criticism_sorted(std::span<const double> sorted_abs) {
  const std::size_t n = sorted_abs.size();
  if (n == 0) throw std::invalid_argument("higher_criticism: sample is empty");
  const double nd = static_cast<double>(n);
  double best = 0.0;
  double best_log = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i <= n; ++i) {
    const double a = sorted_abs[i - 1];
    const double psi = folded_cdf(a);
    const double tail = folded_survival(a);
    // F_n(a) = i/n on the right of the jump and (i-1)/n on the left; use the
    // factor of Psi that carries the precision.
    double right, left;
    if (psi < 0.5) {
      right = std::fabs(static_cast<double>(i) / nd - psi);
      left = std::fabs(static_cast<double>(i - 1) / nd - psi);
    } else {
      right = std::fabs(tail - static_cast<double>(n - i) / nd);
      left = std::fabs(tail - static_cast<double>(n - i + 1) / nd);
    }
    const double numerator = std::max(right, left);
    if (numerator == 0.0) continue;
    const double denom2 = psi * tail;
    if (denom2 > 1e-290) {
      best = std::max(best, numerator / std::sqrt(denom2));
    } else {
      const double log_denom2 = (a == 0.0 ? -std::numeric_limits<double>::infinity()
                                          : log_folded_cdf(a)) +
                                log_folded_survival(a);
      best_log = std::max(best_log, std::log(numerator) - 0.5 * log_denom2);
    }
  }
  if (best_log == -std::numeric_limits<double>::infinity()) {
    const double h = std::sqrt(nd) * best;
    return std::isfinite(h) ? h : kMaxStatistic;
  }
  const double log_best = std::max(best > 0.0 ? std::log(best) : best_log, best_log);
  return saturating_exp(0.5 * std::log(nd) + log_best);
}

double higher_criticism_inplace(std::span<double> values) {
  for (double& x : values) x = std::fabs(x);
  std::sort(values.begin(), values.end());
  return higher_criticism_sorted(values);
}

TestOutcome higher_criticism(std::span<const double> values) {
  std::vector<double> scratch(values.begin(), values.end());
  return {TestId::kHC, higher_criticism_inplace(scratch), std::nullopt, Calibration::kNone};
}

}  // namespace svcm
