// Copyright 2026 The intermed Authors
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

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "intermed/distribution.hpp"
#include "test_support.hpp"

namespace intermed {
namespace {

ValueDistribution pareto(double eps, double h) {
  return make_pareto_truncated(ParetoTruncatedParams::make(eps, h));
}

TEST(VirtualValue, UniformMidpointIsZero) {
  EXPECT_NEAR(virtual_value(make_uniform(0.0, 1.0), 0.5), 0.0, 1e-12);
}

TEST(VirtualValue, ParetoInteriorIsLinear) {
  const auto f = pareto(1.0, 100.0);
  EXPECT_NEAR(virtual_value(f, 2.0), 1.0, 1e-12);
  for (double v : {1.0, 3.0, 17.5, 99.0}) EXPECT_NEAR(virtual_value(f, v), 0.5 * v, 1e-10);
}

TEST(VirtualValue, UpperAtomMapsToItself) {
  EXPECT_DOUBLE_EQ(virtual_value(pareto(1.0, 100.0), 100.0), 100.0);
  EXPECT_NEAR(virtual_value_below_upper(pareto(1.0, 100.0)), 50.0, 1e-9);
}

TEST(VirtualValue, OutsideSupportThrows) {
  const auto u = make_uniform(0.0, 1.0);
  try {
    virtual_value(u, 1.5);
    FAIL() << "expected OutOfSupport";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kOutOfSupport);
  }
}

TEST(VirtualValue, ZeroDensityThrows) {
  // Two separated blocks: the flat stretch in between has no density.
  const auto gap = make_table({{0.0, 0.0}, {1.0, 0.5}, {2.0, 0.5}, {3.0, 1.0}});
  try {
    virtual_value(gap, 1.5);
    FAIL() << "expected ZeroDensity";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kZeroDensity);
  }
}

TEST(InverseVirtualValue, SpecPoints) {
  EXPECT_NEAR(*inverse_virtual_value(make_uniform(0.0, 1.0), 0.0, 1e-12), 0.5, 1e-10);
  EXPECT_NEAR(*inverse_virtual_value(pareto(1.0, 100.0), 10.0, 1e-12), 20.0, 1e-9);
  EXPECT_NEAR(*inverse_virtual_value(make_exponential(1.0, 50.0), 0.0, 1e-12), 1.0, 1e-9);
}

TEST(InverseVirtualValue, AgreesWithIndependentBisection) {
  const auto f = make_exponential(0.7, 40.0);
  for (double t : {-0.5, 0.0, 1.0, 3.0, 10.0}) {
    const double ref = testing::bisect(
        [&](double v) { return v - 1.0 / 0.7 - t; }, 0.0, 40.0);
    EXPECT_NEAR(*inverse_virtual_value(f, t, 1e-12), std::max(ref, 0.0), 1e-8) << t;
  }
}

TEST(InverseVirtualValue, BeyondTopIsEmpty) {
  EXPECT_FALSE(inverse_virtual_value(make_uniform(0.0, 1.0), 1.5).has_value());
  EXPECT_DOUBLE_EQ(*inverse_virtual_value(make_uniform(0.0, 1.0), -5.0), 0.0);
}

TEST(InverseVirtualValue, IrregularDistributionThrows) {
  // Mass piled near both ends makes phi fall in the middle.
  const auto bimodal = make_table({{0.0, 0.0}, {1.0, 0.45}, {9.0, 0.55}, {10.0, 1.0}});
  EXPECT_THROW(inverse_virtual_value(bimodal, 6.0), Error);
}

TEST(StrongRegularity, SpecPoints) {
  const auto f = pareto(1.0, 100.0);
  EXPECT_TRUE(check_alpha_strong_regularity(f, 0.5).passes);
  const auto fail = check_alpha_strong_regularity(f, 0.9);
  EXPECT_FALSE(fail.passes);
  ASSERT_TRUE(fail.violation_point.has_value());
  EXPECT_GE(*fail.violation_point, 1.0);
  EXPECT_LT(*fail.violation_point, 100.0);
  EXPECT_TRUE(check_alpha_strong_regularity(make_uniform(0.0, 1.0), 1.0).passes);
}

TEST(StrongRegularity, Classification) {
  const auto u = check_alpha_strong_regularity(make_uniform(0.0, 1.0), 0.0);
  EXPECT_TRUE(u.is_regular);
  EXPECT_TRUE(u.is_mhr);
  const auto p = check_alpha_strong_regularity(pareto(0.5, 100.0), 0.0);
  EXPECT_TRUE(p.is_regular);
  EXPECT_FALSE(p.is_mhr);
  EXPECT_NEAR(p.alpha_lower, 1.0 / 3.0, 1e-9);
  EXPECT_NEAR(certified_alpha(pareto(0.5, 100.0)), 1.0 / 3.0, 1e-9);
  EXPECT_DOUBLE_EQ(certified_alpha(make_exponential(1.0, 50.0)), 1.0);
  const auto bimodal = make_table({{0.0, 0.0}, {1.0, 0.45}, {9.0, 0.55}, {10.0, 1.0}});
  EXPECT_FALSE(check_alpha_strong_regularity(bimodal, 0.0).is_regular);
  EXPECT_THROW(require_regular(BidderProfile::iid(bimodal, 2)), Error);
}

TEST(CAlpha, Values) {
  EXPECT_NEAR(c_alpha(1.0), 0.36787944117144233, 1e-15);
  EXPECT_NEAR(c_alpha(1.0 / 3.0), std::pow(1.0 / 3.0, 1.5), 1e-15);
  EXPECT_NEAR(c_alpha(1.0 / 3.0), 0.19245, 1e-5);
  EXPECT_LT(c_alpha(1e-6), 1e-5);
  EXPECT_THROW(c_alpha(0.0), Error);
  EXPECT_THROW(c_alpha(1.5), Error);
}

TEST(CAlpha, ContinuousAtOne) {
  // c(1 - d) = e^-1 (1 + d/2 + O(d^2)); at d = 1e-6 the gap is about 1.84e-7.
  const double d = 1e-6;
  const double gap = std::abs(c_alpha(1.0 - d) - c_alpha(1.0));
  EXPECT_LT(gap, 0.5 * d * std::exp(-1.0) * 1.01);
  EXPECT_GT(gap, 0.5 * d * std::exp(-1.0) * 0.99);
}

TEST(Pareto, CdfAndAtom) {
  const auto f = pareto(1.0, 100.0);
  EXPECT_NEAR(f.cdf(2.0), 0.75, 1e-15);
  EXPECT_NEAR(f.atom_hi(), 1e-4, 1e-18);
  EXPECT_DOUBLE_EQ(pareto(0.5, 8.0).cdf(1.0), 0.0);
  EXPECT_NEAR(f.survival(100.0), 1e-4, 1e-18);
  EXPECT_DOUBLE_EQ(f.survival(100.5), 0.0);
  // Continuous part plus atom integrate to one.
  const double mass = testing::simpson([&](double x) { return f.pdf(x); }, 1.0, 100.0, 200000);
  EXPECT_NEAR(mass + f.atom_hi(), 1.0, 1e-8);
}

TEST(Pareto, RejectsBadParameters) {
  EXPECT_THROW(ParetoTruncatedParams::make(0.0, 10.0), Error);
  EXPECT_THROW(ParetoTruncatedParams::make(1.0, 1.0), Error);
  try {
    ParetoTruncatedParams::make(1.0, 4.0, true);
    FAIL() << "expected SeparationViolated";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kSeparationViolated);
  }
  EXPECT_NO_THROW(ParetoTruncatedParams::make(1.0, 4.01, true));
}

TEST(Table, Validation) {
  EXPECT_THROW(make_table({{0.0, 0.0}}), Error);
  EXPECT_THROW(make_table({{0.0, 0.0}, {0.0, 1.0}}), Error);
  EXPECT_THROW(make_table({{0.0, 0.0}, {1.0, 0.6}, {2.0, 0.5}}), Error);
  EXPECT_THROW(make_table({{0.0, 0.1}, {1.0, 1.0}}), Error);
  const auto t = make_table({{0.0, 0.0}, {1.0, 0.8}});
  EXPECT_NEAR(t.atom_hi(), 0.2, 1e-15);
  EXPECT_NEAR(t.cdf(0.5), 0.4, 1e-15);
  EXPECT_NEAR(t.quantile(0.4), 0.5, 1e-12);
}

TEST(Exponential, DefaultCapAndQuantile) {
  const auto e = make_exponential(1.0);
  EXPECT_NEAR(e.support_hi(), -std::log(1e-9), 1e-9);
  const auto capped = make_exponential(2.0, 5.0);
  EXPECT_NEAR(capped.atom_hi(), std::exp(-10.0), 1e-18);
  EXPECT_NEAR(capped.quantile(1.0 - std::exp(-2.0)), 1.0, 1e-9);
  EXPECT_DOUBLE_EQ(capped.quantile(1.0 - 0.5 * std::exp(-10.0)), 5.0);
}

TEST(MaxDistribution, CdfPowerAndIdentity) {
  const auto u = make_uniform(0.0, 1.0);
  EXPECT_NEAR(max_distribution(u, 2).cdf(0.5), 0.25, 1e-15);
  EXPECT_NEAR(max_distribution(u, 3).pdf(0.5), 3.0 * 0.25, 1e-12);
  const auto f = pareto(0.5, 20.0);
  const auto same = max_distribution(f, 1);
  for (double x : support_grid(f, 50)) EXPECT_DOUBLE_EQ(same.cdf(x), f.cdf(x));
  const auto m = max_distribution(f, 3);
  EXPECT_NEAR(m.atom_hi(), 1.0 - std::pow(1.0 - f.atom_hi(), 3), 1e-15);
  EXPECT_THROW(max_distribution(u, 0), Error);
}

TEST(MaxDistribution, ExponentialMaximumKeepsMonotoneHazard) {
  const auto m = max_distribution(make_exponential(1.0, 50.0), 3);
  const auto grid = support_grid(m, 1000);
  double prev = 0.0;
  for (double x : grid) {
    if (m.tail(x) <= 1e-12) break;
    const double h = hazard_rate(m, x);
    EXPECT_GE(h, prev - 1e-8) << x;
    prev = h;
  }
}

TEST(HazardRate, SpecPoints) {
  EXPECT_NEAR(hazard_rate(make_exponential(1.0, 50.0), 2.0), 1.0, 1e-12);
  EXPECT_NEAR(hazard_rate(make_uniform(0.0, 1.0), 0.5), 2.0, 1e-12);
  EXPECT_NEAR(hazard_rate(make_uniform(0.0, 1.0), 0.0), 1.0, 1e-12);
  try {
    hazard_rate(make_uniform(0.0, 1.0), 1.0);
    FAIL() << "expected SaturatedCdf";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kSaturatedCdf);
  }
}

TEST(ShiftedDistribution, SpecPoints) {
  const auto e = make_exponential(1.0, 50.0);
  const auto g = shifted_distribution(e, 1.0);
  EXPECT_NEAR(g.cdf(1.0), 1.0 - std::exp(-1.0), 1e-9);
  EXPECT_NEAR(shifted_distribution(make_uniform(0.0, 1.0), 0.5).cdf(0.25), 0.5, 1e-15);
  const auto same = shifted_distribution(e, 0.0);
  for (double x : {0.1, 1.0, 7.0}) EXPECT_DOUBLE_EQ(same.cdf(x), e.cdf(x));
  EXPECT_THROW(shifted_distribution(make_uniform(0.0, 1.0), 1.0), Error);
}

TEST(Distribution, QuantileInvertsCdf) {
  for (const auto& d : {make_uniform(0.5, 2.0), make_exponential(1.5, 20.0), pareto(2.0, 30.0),
                        max_distribution(pareto(0.5, 30.0), 2)}) {
    for (double u : {0.01, 0.3, 0.5, 0.9}) {
      EXPECT_NEAR(d.cdf(d.quantile(u)), u, 1e-9) << d.describe();
    }
  }
}

TEST(Distribution, ConstantValueProxy) {
  const auto c = make_constant_value(3.0, 1e-3);
  EXPECT_NEAR(c.support_lo(), 2.997, 1e-12);
  EXPECT_DOUBLE_EQ(c.support_hi(), 3.0);
  EXPECT_NEAR(c.cdf(2.9985), 0.5, 1e-9);
}

TEST(BidderProfile, Basics) {
  const auto u = make_uniform(0.0, 1.0);
  const auto p = BidderProfile::iid(u, 3);
  EXPECT_TRUE(p.iid());
  EXPECT_EQ(p.size(), 3u);
  const BidderProfile mixed({u, make_exponential(1.0, 50.0)});
  EXPECT_FALSE(mixed.iid());
  EXPECT_DOUBLE_EQ(mixed.max_hi(), 50.0);
  EXPECT_THROW(BidderProfile({}), Error);
}

}  // namespace
}  // namespace intermed
