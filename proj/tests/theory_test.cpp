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
#include <vector>

#include "gtest/gtest.h"
#include "svcm/numerics.hpp"
#include "svcm/rng.hpp"

namespace svcm {
namespace {

TEST(SecondMomentTest, Examples) {
  const auto null = second_moment_L(MixtureParams(0.0, 0.3), 1000);
  EXPECT_TRUE(null.valid);
  EXPECT_EQ(null.per_obs, 1.0);
  EXPECT_EQ(null.bound, 1.0);

  const auto unit = second_moment_L(MixtureParams(0.3, 1.0), 1000);
  EXPECT_EQ(unit.per_obs, 1.0);
  EXPECT_EQ(unit.bound, 1.0);

  const auto r = second_moment_L(MixtureParams(0.1, 0.5), 100);
  EXPECT_TRUE(r.valid);
  EXPECT_NEAR(r.per_obs, 1.0051185789203691, 1e-15);
  EXPECT_NEAR(r.bound, std::exp(100 * 0.0051185789203691), 1e-12);

  const auto diverges = second_moment_L(MixtureParams(0.1, 1.5), 100);
  EXPECT_FALSE(diverges.valid);
  EXPECT_TRUE(std::isnan(diverges.per_obs));
}

TEST(SecondMomentTest, MonteCarloAgreement) {
  const double eps = 0.1, sigma = 0.5;
  const double c = (sigma * sigma - 1) / (2 * sigma * sigma);
  Xoshiro256 rng(2024);
  const int m = 200000;
  double sum = 0, sum2 = 0;
  for (int i = 0; i < m; ++i) {
    const double x = normal_quantile(rng.uniform_open());
    const double l = 1 - eps + eps / sigma * std::exp(c * x * x);
    sum += l * l;
    sum2 += l * l * l * l;
  }
  const double mean = sum / m;
  const double se = std::sqrt((sum2 / m - mean * mean) / m);
  EXPECT_NEAR(mean, second_moment_L(MixtureParams(eps, sigma), 1).per_obs, 3 * se);
}

TEST(SecondMomentTest, BoundAtLeastOne) {
  for (double eps : {0.0, 0.01, 0.2, 0.45}) {
    for (double sigma : {0.05, 0.5, 0.99, 1.0, 1.01, 1.3, 1.41}) {
      const auto r = second_moment_L(MixtureParams(eps, sigma), 500);
      ASSERT_TRUE(r.valid);
      if (eps == 0.0 || sigma == 1.0) {
        EXPECT_EQ(r.bound, 1.0);
      } else {
        EXPECT_GT(r.bound, 1.0);
      }
    }
  }
}

TEST(WMomentsTest, Examples) {
  const auto a = w_moments(MixtureParams::null(), 100);
  EXPECT_EQ(a.mean, 100.0);
  EXPECT_EQ(a.variance, 200.0);
  const auto b = w_moments(MixtureParams(0.01, 2.0), 100);
  EXPECT_NEAR(b.mean, 103.0, 1e-12);
  EXPECT_NEAR(b.variance, 230.0, 1e-12);
  const auto c = w_moments(MixtureParams(0.004, 3.0), 10000);
  EXPECT_NEAR(c.mean, 10320.0, 1e-9);
  EXPECT_NEAR(c.variance, 26400.0, 1e-9);
}

TEST(DetectionBoundaryTest, Examples) {
  EXPECT_DOUBLE_EQ(*detection_boundary(TestId::kLR, RegimeSpec::near_zero(0.75, 0.3)), 0.5);
  EXPECT_NEAR(*detection_boundary(TestId::kLR, RegimeSpec::fixed(0.6, 2.0)), 1.5811388300841898,
              1e-15);
  EXPECT_DOUBLE_EQ(*detection_boundary(TestId::kExtremes, RegimeSpec::near_zero(0.6, 0.3)), 0.6);
  EXPECT_NEAR(*detection_boundary(TestId::kHC, RegimeSpec::near_one(0.4, 0.3)), 0.1, 1e-15);
  EXPECT_FALSE(detection_boundary(TestId::kLR, RegimeSpec::near_zero(0.4, 0.3)));
  EXPECT_FALSE(detection_boundary(TestId::kLR, RegimeSpec::near_one(0.6, 0.3)));
  EXPECT_FALSE(detection_boundary(TestId::kChiSquared, RegimeSpec::fixed(0.6, 3.0)));
  EXPECT_FALSE(detection_boundary(TestId::kExtremes, RegimeSpec::near_one(0.3, 0.1)));
}

TEST(ClassifyTest, Examples) {
  const auto lr = classify(TestId::kLR, RegimeSpec::near_zero(0.75, 0.2));
  EXPECT_EQ(lr.verdict, Verdict::kUndetectable);
  EXPECT_NEAR(lr.margin, -0.3, 1e-15);

  const auto ex = classify(TestId::kExtremes, RegimeSpec::fixed(0.6, 3.0));
  EXPECT_EQ(ex.verdict, Verdict::kDetectable);
  EXPECT_NEAR(ex.margin, 3.0 - 1.5811388300841898, 1e-14);

  const auto chi = classify(TestId::kChiSquared, RegimeSpec::fixed(0.6, 3.0));
  EXPECT_EQ(chi.verdict, Verdict::kUndetectable);
  EXPECT_NEAR(chi.margin, 0.1, 1e-15);

  EXPECT_EQ(classify(TestId::kHC, RegimeSpec::near_zero(0.75, 0.52)).verdict,
            Verdict::kNearBoundary);
  EXPECT_EQ(classify(TestId::kExtremes, RegimeSpec::near_one(0.3, 0.1)).verdict,
            Verdict::kNotCovered);
  EXPECT_EQ(classify(TestId::kLR, RegimeSpec::fixed(0.3, 1.0)).verdict, Verdict::kUndetectable);
  EXPECT_EQ(classify(TestId::kLR, RegimeSpec::fixed(0.3, 0.7)).verdict, Verdict::kDetectable);
  EXPECT_EQ(classify(TestId::kChiSquared, RegimeSpec::near_one(0.2, 0.1)).verdict,
            Verdict::kDetectable);
}

// Walking the coordinate upward, the verdict changes at most once (ignoring
// the near-boundary band) and the margin is nondecreasing.
TEST(ClassifyTest, FlipsOnceAcrossBoundary) {
  for (TestId test : kAllTests) {
    for (double beta = 0.05; beta < 1.0; beta += 0.05) {
      for (RegimeKind kind : {RegimeKind::kNearZero, RegimeKind::kNearOne, RegimeKind::kFixed}) {
        std::vector<double> coords;
        for (double c = 0.01; c < 3.0; c += 0.01) {
          if (kind == RegimeKind::kFixed && c < 1.0) continue;  // one branch of sigma
          if (kind == RegimeKind::kFixed && std::fabs(c - 1.0) < 1e-9) continue;
          coords.push_back(c);
        }
        int flips = 0;
        std::optional<Verdict> last;
        double prev_margin = -INFINITY;
        for (double c : coords) {
          RegimeSpec spec = kind == RegimeKind::kNearZero ? RegimeSpec::near_zero(beta, c)
                            : kind == RegimeKind::kNearOne ? RegimeSpec::near_one(beta, c)
                                                           : RegimeSpec::fixed(beta, c);
          const auto v = classify(test, spec);
          if (v.verdict == Verdict::kNotCovered) break;
          if (std::isfinite(v.margin)) {
            EXPECT_GE(v.margin, prev_margin - 1e-12);
            prev_margin = v.margin;
          }
          if (v.verdict == Verdict::kNearBoundary) continue;
          if (last && *last != v.verdict) ++flips;
          last = v.verdict;
        }
        EXPECT_LE(flips, 1) << to_string(test) << " beta=" << beta;
      }
    }
  }
}

TEST(ClassifyTest, HigherCriticismDominates) {
  for (double beta = 0.02; beta < 1.0; beta += 0.02) {
    for (double c = 0.02; c < 4.0; c += 0.02) {
      std::vector<RegimeSpec> specs{RegimeSpec::near_zero(beta, c), RegimeSpec::near_one(beta, c)};
      if (std::fabs(c - 1.0) > 1e-9) specs.push_back(RegimeSpec::fixed(beta, c));
      for (const auto& spec : specs) {
        const auto hc = classify(TestId::kHC, spec).verdict;
        for (TestId other : {TestId::kChiSquared, TestId::kExtremes}) {
          if (classify(other, spec).verdict == Verdict::kDetectable) {
            EXPECT_EQ(hc, Verdict::kDetectable)
                << to_string(other) << " " << to_string(spec.kind()) << " beta=" << beta
                << " c=" << c;
          }
        }
        EXPECT_EQ(hc, classify(TestId::kLR, spec).verdict);
      }
    }
  }
}

TEST(TheoryTest, AnalyticThreshold) { EXPECT_NEAR(hc_analytic_threshold(100), std::log(100.0), 0); }

}  // namespace
}  // namespace svcm
