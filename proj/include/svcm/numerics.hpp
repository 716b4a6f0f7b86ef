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

// Normal and chi-squared special functions with usable tail accuracy.
//
// Survival quantities are always computed directly rather than as 1 - CDF;
// callers forming Psi(x) * (1 - Psi(x)) should use folded_survival() for the
// second factor.

#ifndef SVCM_NUMERICS_HPP_
#define SVCM_NUMERICS_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace svcm {

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value in [0, 1]. Converts implicitly to double for arithmetic.
class Probability {
 public:
  constexpr Probability() = default;
  explicit Probability(double value);

  constexpr double value() const noexcept { return value_; }
  constexpr operator double() const noexcept { return value_; }  // NOLINT

 private:
  double value_ = 0.0;
};

/// Standard normal CDF.
double normal_cdf(double x) noexcept;

/// Phi-bar(x) = 1 - Phi(x) via erfc; relative error ~1e-13 for x up to 30.
double normal_survival(double x) noexcept;

/// log Phi-bar(x), finite for every finite x (continued fraction once
/// Phi-bar underflows).
double log_normal_survival(double x) noexcept;

/// Psi(x) = 2 Phi(x) - 1, the CDF of |Z|.
double folded_cdf(double x);

/// 2 Phi-bar(x) = 1 - Psi(x), computed without cancellation.
double folded_survival(double x);

/// log Psi(x) and log(2 Phi-bar(x)), each accurate at both ends of [0, inf).
double log_folded_cdf(double x);
double log_folded_survival(double x);

/// Inverse of the standard normal CDF on (0, 1) (Wichura's AS241, ~1e-16).
double normal_quantile(double p);

/// Regularized incomplete gamma P(a, x) and Q(a, x) = 1 - P(a, x).
/// Series below x = a + 1/2, Lentz continued fraction above; throws
/// NumericError when 10^4 iterations do not reach 1e-14.
double regularized_gamma_p(double a, double x);
double regularized_gamma_q(double a, double x);

/// P(chi^2_k <= w) and P(chi^2_k > w); k up to 10^6.
double chi_squared_cdf(double w, std::int64_t k);
double chi_squared_sf(double w, std::int64_t k);

}  // namespace svcm

#endif  // SVCM_NUMERICS_HPP_
