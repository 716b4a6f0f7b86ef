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

// First-order asymptotic theory: where each test can and cannot detect the
// contamination, plus the closed-form moments used as simulation oracles.
//
// Coordinates: gamma for the near-zero and near-one regimes, sigma for the
// fixed regime. The likelihood ratio's detectable side is inherited from the
// higher criticism results, since the LR test is most powerful.

#ifndef SVCM_THEORY_HPP_
#define SVCM_THEORY_HPP_

#include <cstdint>
#include <optional>
#include <string_view>

#include "svcm/model.hpp"
#include "svcm/statistics.hpp"

namespace svcm {

inline constexpr double kNearBoundaryTolerance = 0.05;

enum class Verdict { kDetectable, kUndetectable, kNearBoundary, kNotCovered };
std::string_view to_string(Verdict verdict);

struct BoundaryVerdict {
  TestId test;
  Verdict verdict;
  // coordinate - boundary; beta - 1/2 for chi-squared outside near-one.
  // +/-infinity when the regime has no boundary (sign follows the verdict),
  // NaN when the combination is not covered.
  double margin;
};

struct SecondMoment {
  double per_obs;  // E0[L_1^2]; NaN when !valid
  double bound;    // exp(n (E0[L_1^2] - 1)) >= E0[L^2]
  bool valid;      // false when sigma >= sqrt(2): the integral diverges
};

/// E0[L_1^2] = 1 + eps^2 ([sigma^2 (2 - sigma^2)]^-1/2 - 1).
SecondMoment second_moment_L(const MixtureParams& params, std::int64_t n);

struct WMoments {
  double mean;
  double variance;
};

/// Mean n(1 - eps + eps sigma^2) and variance 2n(1 - eps + eps sigma^4) of
/// W = sum X_i^2.
WMoments w_moments(const MixtureParams& params, std::int64_t n);

/// Critical gamma or sigma for (test, regime); empty when the regime has no
/// boundary in its coordinate or the combination has no established result.
std::optional<double> detection_boundary(TestId test, const RegimeSpec& spec);

BoundaryVerdict classify(TestId test, const RegimeSpec& spec,
                         double tolerance = kNearBoundaryTolerance);

/// The analytic HC cutoff H >= log n. Informational only: tests in this
/// library are calibrated by simulation instead.
double hc_analytic_threshold(std::int64_t n);

}  // namespace svcm

#endif  // SVCM_THEORY_HPP_
