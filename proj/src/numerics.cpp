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

#include "svcm/numerics.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace svcm {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kLogSqrt2Pi = 0.91893853320467274178;
// Median of |Z|: below it Psi < 1/2 and erf is the well-conditioned factor.
constexpr double kFoldedMedian = 0.67448975019608174;
constexpr int kMaxIterations = 10000;
constexpr double kTolerance = 1e-14;

void require_nonnegative(double x, const char* what) {
  if (!(x >= 0.0)) {
    throw std::invalid_argument(std::string(what) + ": argument must be >= 0, got " +
                                std::to_string(x));
  }
}

// Stirling remainder lgamma(a) - [(a - 1/2) log a - a + log sqrt(2 pi)].
double stirling_correction(double a) {
  const double inv = 1.0 / a;
  const double inv2 = inv * inv;
  return inv * (1.0 / 12 -
                inv2 * (1.0 / 360 - inv2 * (1.0 / 1260 - inv2 * (1.0 / 1680 - inv2 / 1188))));
}

// log1p(t) - t, accurate for small |t|.
double log1pmx(double t) {
  if (std::fabs(t) > 0.25) return std::log1p(t) - t;
  double term = t;
  double sum = 0.0;
  for (int k = 2; k < 200; ++k) {
    term *= -t;
    const double add = term / k;
    sum += add;
    if (std::fabs(add) <= 1e-17 * std::fabs(sum)) break;
  }
  return sum;
}

// log(x^a e^-x / Gamma(a)).
double log_gamma_prefactor(double a, double x) {
  if (x == 0.0) return -std::numeric_limits<double>::infinity();
  if (a < 10.0) return a * std::log(x) - x - std::lgamma(a);
  return a * log1pmx((x - a) / a) + 0.5 * std::log(a) - kLogSqrt2Pi - stirling_correction(a);
}

// Series for P(a, x).
double gamma_p_series(double a, double x) {
  double ap = a;
  double term = 1.0 / a;
  double sum = term;
  for (int i = 0; i < kMaxIterations; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * kTolerance) {
      return std::min(1.0, sum * std::exp(log_gamma_prefactor(a, x)));
    }
  }
  throw NumericError("regularized_gamma_p: series did not converge for a=" + std::to_string(a) +
                     ", x=" + std::to_string(x));
}

// Modified Lentz continued fraction for Q(a, x).
double gamma_q_fraction(double a, double x) {
  constexpr double kTiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kTolerance) {
      return std::min(1.0, std::exp(log_gamma_prefactor(a, x)) * h);
    }
  }
  throw NumericError("regularized_gamma_q: continued fraction did not converge for a=" +
                     std::to_string(a) + ", x=" + std::to_string(x));
}

void check_gamma_args(double a, double x, const char* what) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw std::invalid_argument(std::string(what) + ": shape must be positive and finite");
  }
  require_nonnegative(x, what);
}

std::int64_t check_dof(std::int64_t k, const char* what) {
  if (k < 1) throw std::invalid_argument(std::string(what) + ": degrees of freedom must be >= 1");
  return k;
}

}  // namespace

Probability::Probability(double value) : value_(value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw std::invalid_argument("Probability outside [0, 1]: " + std::to_string(value));
  }
}

double normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x * kInvSqrt2); }

double normal_survival(double x) noexcept { return 0.5 * std::erfc(x * kInvSqrt2); }

double log_normal_survival(double x) noexcept {
  if (x < 37.0) return std::log(normal_survival(x));
  // Phi-bar(x) = phi(x) / (x + 1/(x + 2/(x + 3/(x + ...)))).
  double t = x;
  for (int k = 60; k >= 1; --k) t = x + k / t;
  return -0.5 * x * x - kLogSqrt2Pi - std::log(t);
}

double folded_cdf(double x) {
  require_nonnegative(x, "folded_cdf");
  return std::erf(x * kInvSqrt2);
}

double folded_survival(double x) {
  require_nonnegative(x, "folded_survival");
  return std::erfc(x * kInvSqrt2);
}

double log_folded_cdf(double x) {
  require_nonnegative(x, "log_folded_cdf");
  if (x < kFoldedMedian) return std::log(std::erf(x * kInvSqrt2));
  return std::log1p(-std::erfc(x * kInvSqrt2));
}

double log_folded_survival(double x) {
  require_nonnegative(x, "log_folded_survival");
  if (x < kFoldedMedian) return std::log1p(-std::erf(x * kInvSqrt2));
  return std::numbers::ln2 + log_normal_survival(x);
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("normal_quantile: p must lie in (0, 1), got " + std::to_string(p));
  }
  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((r * 2509.0809287301226727 + 33430.575583588128105) * r +
                 67265.770927008700853) * r + 45921.953931549871457) * r +
               13731.693765509461125) * r + 1971.5909503065514427) * r +
             133.14166789178437745) * r + 3.387132872796366608) /
           (((((((r * 5226.495278852545925 + 28729.085735721942674) * r +
                 39307.89580009271061) * r + 21213.794301586595867) * r +
               5394.1960214247511077) * r + 687.1870074920579083) * r +
             42.313330701600911252) * r + 1.0);
  }
  double r = std::sqrt(-std::log(q < 0.0 ? p : 1.0 - p));
  double value;
  if (r <= 5.0) {
    r -= 1.6;
    value = (((((((r * 7.7454501427834140764e-4 + 0.0227238449892691845833) * r +
                  0.24178072517745061177) * r + 1.27045825245236838258) * r +
                3.64784832476320460504) * r + 5.7694972214606914055) * r +
              4.6303378461565452959) * r + 1.42343711074968357734) /
            (((((((r * 1.05075007164441684324e-9 + 5.475938084995344946e-4) * r +
                  0.0151986665636164571966) * r + 0.14810397642748007459) * r +
                0.68976733498510000455) * r + 1.6763848301838038494) * r +
              2.05319162663775882187) * r + 1.0);
  } else {
    r -= 5.0;
    value = (((((((r * 2.01033439929228813265e-7 + 2.71155556874348757815e-5) * r +
                  0.0012426609473880784386) * r + 0.026532189526576123093) * r +
                0.29656057182850489123) * r + 1.7848265399172913358) * r +
              5.4637849111641143699) * r + 6.6579046435011037772) /
            (((((((r * 2.04426310338993978564e-15 + 1.4215117583164458887e-7) * r +
                  1.8463183175100546818e-5) * r + 7.868691311456132591e-4) * r +
                0.0148753612908506148525) * r + 0.13692988092273580531) * r +
              0.59983220655588793769) * r + 1.0);
  }
  return q < 0.0 ? -value : value;
}

double regularized_gamma_p(double a, double x) {
  check_gamma_args(a, x, "regularized_gamma_p");
  if (x == 0.0) return 0.0;
  if (x < a + 0.5) return gamma_p_series(a, x);
  return 1.0 - gamma_q_fraction(a, x);
}

double regularized_gamma_q(double a, double x) {
  check_gamma_args(a, x, "regularized_gamma_q");
  if (x == 0.0) return 1.0;
  if (x < a + 0.5) return 1.0 - gamma_p_series(a, x);
  return gamma_q_fraction(a, x);
}

double chi_squared_cdf(double w, std::int64_t k) {
  check_dof(k, "chi_squared_cdf");
  require_nonnegative(w, "chi_squared_cdf");
  return regularized_gamma_p(0.5 * static_cast<double>(k), 0.5 * w);
}

double chi_squared_sf(double w, std::int64_t k) {
  check_dof(k, "chi_squared_sf");
  require_nonnegative(w, "chi_squared_sf");
  return regularized_gamma_q(0.5 * static_cast<double>(k), 0.5 * w);
}

}  // namespace svcm
