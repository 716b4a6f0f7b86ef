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

#include "svcm/theory.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace svcm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSqrt2 = 1.41421356237309504880;

double fixed_sigma_boundary(double beta) { return 1.0 / std::sqrt(1.0 - beta); }

// Detectable when coordinate > boundary.
BoundaryVerdict above(TestId test, double coordinate, double boundary, double tol) {
  const double margin = coordinate - boundary;
  if (std::fabs(margin) < tol) return {test, Verdict::kNearBoundary, margin};
  return {test, margin > 0 ? Verdict::kDetectable : Verdict::kUndetectable, margin};
}

// Detectable when coordinate < boundary.
BoundaryVerdict below(TestId test, double coordinate, double boundary, double tol) {
  const double margin = coordinate - boundary;
  if (std::fabs(margin) < tol) return {test, Verdict::kNearBoundary, margin};
  return {test, margin < 0 ? Verdict::kDetectable : Verdict::kUndetectable, margin};
}

BoundaryVerdict everywhere(TestId test, bool detectable) {
  return {test, detectable ? Verdict::kDetectable : Verdict::kUndetectable,
          detectable ? kInf : -kInf};
}

}  // namespace

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::kDetectable:
      return "detectable";
    case Verdict::kUndetectable:
      return "undetectable";
    case Verdict::kNearBoundary:
      return "near-boundary";
    case Verdict::kNotCovered:
      return "not-covered";
  }
  return "?";
}

SecondMoment second_moment_L(const MixtureParams& params, std::int64_t n) {
  if (n < 1) throw std::invalid_argument("second_moment_L: n must be >= 1");
  const double eps = params.epsilon();
  const double s2 = params.sigma() * params.sigma();
  if (eps == 0.0) return {1.0, 1.0, true};
  if (params.sigma() >= kSqrt2) return {std::nan(""), kInf, false};
  const double excess = eps * eps * (1.0 / std::sqrt(s2 * (2.0 - s2)) - 1.0);
  return {1.0 + excess, std::exp(static_cast<double>(n) * excess), true};
}

WMoments w_moments(const MixtureParams& params, std::int64_t n) {
  if (n < 1) throw std::invalid_argument("w_moments: n must be >= 1");
  const double nd = static_cast<double>(n);
  const double eps = params.epsilon();
  const double s2 = params.sigma() * params.sigma();
  return {nd * (1.0 - eps + eps * s2), 2.0 * nd * (1.0 - eps + eps * s2 * s2)};
}

std::optional<double> detection_boundary(TestId test, const RegimeSpec& spec) {
  const double beta = spec.beta();
  switch (spec.kind()) {
    case RegimeKind::kNearZero:
      if (test == TestId::kExtremes) return beta;
      if ((test == TestId::kLR || test == TestId::kHC) && beta > 0.5) return 2.0 * beta - 1.0;
      return std::nullopt;
    case RegimeKind::kNearOne:
      if (test == TestId::kExtremes || beta >= 0.5) return std::nullopt;
      return 0.5 - beta;
    case RegimeKind::kFixed:
      if (test == TestId::kChiSquared) return std::nullopt;
      if (test == TestId::kExtremes || beta >= 0.5) return fixed_sigma_boundary(beta);
      return std::nullopt;
  }
  return std::nullopt;
}

BoundaryVerdict classify(TestId test, const RegimeSpec& spec, double tolerance) {
  if (!(tolerance > 0.0)) throw std::invalid_argument("classify: tolerance must be > 0");
  const double beta = spec.beta();
  switch (spec.kind()) {
    case RegimeKind::kNearZero: {
      const double gamma = spec.gamma();
      if (test == TestId::kChiSquared) return below(test, beta, 0.5, tolerance);
      if (test == TestId::kExtremes) return above(test, gamma, beta, tolerance);
      if (beta > 0.5) return above(test, gamma, 2.0 * beta - 1.0, tolerance);
      return everywhere(test, true);
    }
    case RegimeKind::kNearOne: {
      if (test == TestId::kExtremes) return {test, Verdict::kNotCovered, std::nan("")};
      if (beta >= 0.5) return everywhere(test, false);
      return below(test, spec.gamma(), 0.5 - beta, tolerance);
    }
    case RegimeKind::kFixed: {
      const double sigma = spec.sigma_fixed();
      if (sigma == 1.0) return everywhere(test, false);
      if (test == TestId::kChiSquared) return below(test, beta, 0.5, tolerance);
      if (test == TestId::kExtremes || beta >= 0.5) {
        return above(test, sigma, fixed_sigma_boundary(beta), tolerance);
      }
      return everywhere(test, true);
    }
  }
  return {test, Verdict::kNotCovered, std::nan("")};
}

double hc_analytic_threshold(std::int64_t n) { return std::log(static_cast<double>(n)); }

}  // namespace svcm
