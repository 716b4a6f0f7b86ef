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

#include "svcm/model.hpp"

#include <cmath>
#include <stdexcept>

#include "svcm/numerics.hpp"
#include "svcm/rng.hpp"

namespace svcm {

namespace {

[[noreturn]] void reject(const std::string& message) { throw std::invalid_argument(message); }

void check_beta(double beta) {
  if (!(beta > 0.0 && beta < 1.0)) reject("beta must lie in (0, 1), got " + std::to_string(beta));
}

void check_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    reject(std::string(name) + " must be positive and finite, got " + std::to_string(value));
  }
}

}  // namespace

MixtureParams::MixtureParams(double epsilon, double sigma) : epsilon_(epsilon), sigma_(sigma) {
  if (!(epsilon >= 0.0 && epsilon < 0.5)) {
    reject("epsilon must lie in [0, 1/2), got " + std::to_string(epsilon));
  }
  check_positive(sigma, "sigma");
}

std::string_view to_string(RegimeKind kind) {
  switch (kind) {
    case RegimeKind::kNearZero:
      return "near-zero";
    case RegimeKind::kNearOne:
      return "near-one";
    case RegimeKind::kFixed:
      return "fixed";
  }
  return "?";
}

RegimeKind parse_regime_kind(std::string_view text) {
  if (text == "near-zero" || text == "nearzero" || text == "zero") return RegimeKind::kNearZero;
  if (text == "near-one" || text == "nearone" || text == "one") return RegimeKind::kNearOne;
  if (text == "fixed") return RegimeKind::kFixed;
  reject("unknown regime '" + std::string(text) + "' (expected near-zero, near-one or fixed)");
}

std::string_view to_string(Side side) { return side == Side::kBelow ? "below" : "above"; }

Side parse_side(std::string_view text) {
  if (text == "below") return Side::kBelow;
  if (text == "above") return Side::kAbove;
  reject("unknown side '" + std::string(text) + "' (expected below or above)");
}

RegimeSpec::RegimeSpec(RegimeKind kind, double beta, double gamma, double sigma, Side side)
    : kind_(kind), beta_(beta), gamma_(gamma), sigma_(sigma), side_(side) {
  check_beta(beta);
  if (kind == RegimeKind::kFixed) {
    check_positive(sigma, "sigma_fixed");
  } else {
    check_positive(gamma, "gamma");
  }
}

RegimeSpec RegimeSpec::near_zero(double beta, double gamma) {
  return {RegimeKind::kNearZero, beta, gamma, std::nan(""), Side::kAbove};
}

RegimeSpec RegimeSpec::near_one(double beta, double gamma, Side side) {
  return {RegimeKind::kNearOne, beta, gamma, std::nan(""), side};
}

RegimeSpec RegimeSpec::fixed(double beta, double sigma) {
  return {RegimeKind::kFixed, beta, std::nan(""), sigma, Side::kAbove};
}

double RegimeSpec::gamma() const {
  if (kind_ == RegimeKind::kFixed) reject("gamma is not defined for the fixed regime");
  return gamma_;
}

double RegimeSpec::sigma_fixed() const {
  if (kind_ != RegimeKind::kFixed) reject("sigma_fixed is only defined for the fixed regime");
  return sigma_;
}

Side RegimeSpec::side() const {
  if (kind_ != RegimeKind::kNearOne) reject("side is only defined for the near-one regime");
  return side_;
}

RegimeSpec RegimeSpec::with_coordinate(double value) const {
  if (kind_ == RegimeKind::kFixed) return fixed(beta_, value);
  return {kind_, beta_, value, sigma_, side_};
}

MixtureParams resolve_regime(const RegimeSpec& spec, std::int64_t n) {
  if (n < 1) reject("resolve_regime: n must be >= 1");
  const double nd = static_cast<double>(n);
  const double epsilon = std::pow(nd, -spec.beta());
  if (epsilon >= 0.5) {
    reject("resolve_regime: epsilon = n^-beta = " + std::to_string(epsilon) +
           " is not below 1/2 (n too small for this beta)");
  }
  double sigma = 0.0;
  switch (spec.kind()) {
    case RegimeKind::kNearZero:
      sigma = std::pow(nd, -spec.gamma());
      break;
    case RegimeKind::kNearOne: {
      const double offset = std::pow(nd, -spec.gamma());
      if (spec.side() == Side::kBelow) {
        if (offset >= 1.0) reject("resolve_regime: near-one/below needs n^-gamma < 1 (sigma <= 0)");
        sigma = 1.0 - offset;
      } else {
        sigma = 1.0 + offset;
      }
      break;
    }
    case RegimeKind::kFixed:
      sigma = spec.sigma_fixed();
      break;
  }
  return {epsilon, sigma};
}

void sample_into(const MixtureParams& params, std::uint64_t seed, std::span<double> out) {
  Xoshiro256 rng(seed);
  const double epsilon = params.epsilon();
  const double sigma = params.sigma();
  for (double& x : out) {
    const bool contaminated = rng.uniform_open() < epsilon;
    const double z = normal_quantile(rng.uniform_open());
    x = contaminated ? sigma * z : z;
  }
}

Sample sample(const MixtureParams& params, std::int64_t n, std::uint64_t seed) {
  if (n < 1) reject("sample: n must be >= 1");
  Sample s{std::vector<double>(static_cast<std::size_t>(n)), seed, params};
  sample_into(params, seed, s.values);
  return s;
}

double mixture_abs_cdf(double t, const MixtureParams& params) {
  if (!(t >= 0.0)) reject("mixture_abs_cdf: t must be >= 0");
  const double eps = params.epsilon();
  return (1.0 - eps) * folded_cdf(t) + eps * folded_cdf(t / params.sigma());
}

}  // namespace svcm
