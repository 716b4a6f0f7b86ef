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

// The two-component scale mixture (1 - eps) N(0, 1) + eps N(0, sigma^2), its
// asymptotic parameterizations in n, and iid sampling from it.

#ifndef SVCM_MODEL_HPP_
#define SVCM_MODEL_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace svcm {

/// (epsilon, sigma). epsilon == 0 is the null whatever sigma is.
class MixtureParams {
 public:
  /// Throws std::invalid_argument unless 0 <= epsilon < 1/2 and sigma is
  /// positive and finite.
  MixtureParams(double epsilon, double sigma);

  static MixtureParams null() { return {0.0, 1.0}; }

  double epsilon() const noexcept { return epsilon_; }
  double sigma() const noexcept { return sigma_; }

  /// True when the law equals N(0, 1): epsilon == 0 or sigma == 1.
  bool is_null_law() const noexcept { return epsilon_ == 0.0 || sigma_ == 1.0; }

  friend bool operator==(const MixtureParams&, const MixtureParams&) = default;

 private:
  double epsilon_;
  double sigma_;
};

enum class RegimeKind { kNearZero, kNearOne, kFixed };
enum class Side { kBelow, kAbove };

std::string_view to_string(RegimeKind kind);
RegimeKind parse_regime_kind(std::string_view text);
std::string_view to_string(Side side);
Side parse_side(std::string_view text);

/// epsilon = n^-beta together with one of
///   NearZero: sigma = n^-gamma
///   NearOne:  sigma = 1 -/+ n^-gamma
///   Fixed:    sigma = sigma_fixed
class RegimeSpec {
 public:
  static RegimeSpec near_zero(double beta, double gamma);
  static RegimeSpec near_one(double beta, double gamma, Side side = Side::kAbove);
  static RegimeSpec fixed(double beta, double sigma);

  RegimeKind kind() const noexcept { return kind_; }
  double beta() const noexcept { return beta_; }
  /// Only meaningful for NearZero / NearOne.
  double gamma() const;
  /// Only meaningful for Fixed.
  double sigma_fixed() const;
  /// Only meaningful for NearOne.
  Side side() const;

  /// The coordinate the regime varies in: gamma, or sigma for Fixed.
  double coordinate() const noexcept { return kind_ == RegimeKind::kFixed ? sigma_ : gamma_; }

  /// Same regime with its coordinate replaced.
  RegimeSpec with_coordinate(double value) const;

 private:
  RegimeSpec(RegimeKind kind, double beta, double gamma, double sigma, Side side);

  RegimeKind kind_;
  double beta_;
  double gamma_;
  double sigma_;
  Side side_;
};

/// Throws std::invalid_argument when the result would violate the
/// MixtureParams invariants (sigma <= 0 on NearOne/Below, epsilon >= 1/2).
MixtureParams resolve_regime(const RegimeSpec& spec, std::int64_t n);

struct Sample {
  std::vector<double> values;
  std::uint64_t seed = 0;
  MixtureParams params = MixtureParams::null();

  std::size_t n() const noexcept { return values.size(); }
};

/// n iid draws; each observation consumes two uniforms from the stream
/// seeded by `seed` (component choice, then Phi^-1). Bit-reproducible.
Sample sample(const MixtureParams& params, std::int64_t n, std::uint64_t seed);

/// Allocation-free variant used by the Monte Carlo loops.
void sample_into(const MixtureParams& params, std::uint64_t seed, std::span<double> out);

/// Lambda(t) = (1 - eps) Psi(t) + eps Psi(t / sigma), the CDF of |X|.
double mixture_abs_cdf(double t, const MixtureParams& params);

}  // namespace svcm

#endif  // SVCM_MODEL_HPP_
