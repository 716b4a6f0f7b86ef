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

// The four detection statistics: likelihood ratio, chi-squared, extremes
// (Bonferroni-combined min/max of |X|) and higher criticism on |X|.

#ifndef SVCM_STATISTICS_HPP_
#define SVCM_STATISTICS_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "svcm/model.hpp"
#include "svcm/numerics.hpp"

namespace svcm {

enum class TestId { kLR, kChiSquared, kExtremes, kHC };

inline constexpr TestId kAllTests[] = {TestId::kLR, TestId::kChiSquared, TestId::kExtremes,
                                       TestId::kHC};

/// "lr", "chisq", "extremes", "hc".
std::string_view to_string(TestId test);
TestId parse_test_id(std::string_view text);

enum class Calibration { kClosedForm, kMonteCarlo, kNone };
std::string_view to_string(Calibration calibration);

/// Statistics are oriented so that large values are evidence against H0.
struct TestOutcome {
  TestId test;
  double statistic;
  std::optional<Probability> p_value;
  Calibration calibration;
};

struct ExtremesDetail {
  double min_abs;
  double max_abs;
  Probability p_min;  // P0(min |X| <= min_abs)
  Probability p_max;  // P0(max |X| >= max_abs)
  Probability p_bonferroni;
};

struct ChiSquaredResult {
  TestOutcome outcome;
  double sum_of_squares;  // W
};

struct ExtremesResult {
  TestOutcome outcome;
  ExtremesDetail detail;
};

/// Sum of log L_i with L_i = 1 - eps + (eps / sigma) exp((sigma^2 - 1) x^2 / (2 sigma^2)),
/// evaluated as a two-term log-sum-exp. Requires eps > 0 and sigma != 1.
double log_likelihood_ratio(std::span<const double> values, const MixtureParams& params);
inline double log_likelihood_ratio(const Sample& s, const MixtureParams& params) {
  return log_likelihood_ratio(s.values, params);
}

/// Statistic |W - n| with a two-sided closed-form chi^2_n p-value.
ChiSquaredResult chi_squared_test(std::span<const double> values);
inline ChiSquaredResult chi_squared_test(const Sample& s) { return chi_squared_test(s.values); }

/// Exact null p-values for min and max of |X|; statistic is -log p_bonferroni.
ExtremesResult extremes_test(std::span<const double> values);
inline ExtremesResult extremes_test(const Sample& s) { return extremes_test(s.values); }

/// sup_{x >= 0} sqrt(n) |F_n(x) - Psi(x)| / sqrt(Psi(x) (1 - Psi(x))), evaluated
/// exactly at both one-sided limits of every jump of F_n. Returned with
/// calibration kNone; attach_mc_p_value() supplies the Monte Carlo p-value.
TestOutcome higher_criticism(std::span<const double> values);
inline TestOutcome higher_criticism(const Sample& s) { return higher_criticism(s.values); }

/// Same statistic, reusing `values` as scratch: on return it holds the sorted
/// absolute values.
double higher_criticism_inplace(std::span<double> values);

/// HC of already sorted, nonnegative values.
double higher_criticism_sorted(std::span<const double> sorted_abs);

}  // namespace svcm

#endif  // SVCM_STATISTICS_HPP_
