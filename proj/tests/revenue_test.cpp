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

#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "intermed/revenue.hpp"
#include "test_support.hpp"

namespace intermed {
namespace {

EstimatorConfig quadrature() {
  EstimatorConfig cfg;
  cfg.backend = Backend::kQuadrature;
  return cfg;
}

EstimatorConfig monte_carlo(std::size_t n = 400000) {
  EstimatorConfig cfg;
  cfg.backend = Backend::kMonteCarlo;
  cfg.sample_count = n;
  cfg.seed = 99;
  return cfg;
}

BidderProfile pareto1(double eps, double h, std::size_t n = 1) {
  return BidderProfile::iid(make_pareto_truncated(ParetoTruncatedParams::make(eps, h)), n);
}

TEST(EstimatorConfig, Validation) {
  EstimatorConfig cfg;
  cfg.sample_count = 0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = {};
  cfg.quadrature_points = 4;
  EXPECT_THROW(cfg.validate(), Error);
  EXPECT_EQ(EstimatorConfig{}.method_for(pareto1(1.0, 100.0)), Method::kQuadrature);
  EXPECT_EQ(EstimatorConfig{}.method_for(pareto1(1.0, 100.0, 2)), Method::kMonteCarlo);
}

TEST(SellerFirstRevenues, ParetoAtSupportFloor) {
  const auto r = seller_first_revenues(1.0, pareto1(1.0, 100.0), quadrature());
  EXPECT_NEAR(r.seller_revenue, 0.25, 1e-9);
  // E[(phi(v) - 1)^+] = alpha^(1+eps)/eps at eps = 1: 0.25.
  EXPECT_NEAR(r.intermediary_revenue, 0.25, 1e-6);
  EXPECT_NEAR(r.sale_probability, 0.25, 1e-9);
}

TEST(SellerFirstRevenues, ParetoMonteCarloWithinNoise) {
  const auto r = seller_first_revenues(1.0, pareto1(1.0, 100.0), monte_carlo());
  EXPECT_EQ(r.method, Method::kMonteCarlo);
  EXPECT_NEAR(r.seller_revenue, 0.25, 3.0 * r.stderr_seller);
  EXPECT_NEAR(r.intermediary_revenue, 0.25, 3.0 * r.stderr_intermediary);
}

TEST(SellerFirstRevenues, AboveEveryVirtualValueIsZero) {
  for (const auto& cfg : {quadrature(), monte_carlo(10000)}) {
    const auto r = seller_first_revenues(150.0, pareto1(1.0, 100.0), cfg);
    EXPECT_DOUBLE_EQ(r.seller_revenue, 0.0);
    EXPECT_DOUBLE_EQ(r.intermediary_revenue, 0.0);
    EXPECT_DOUBLE_EQ(r.sale_probability, 0.0);
  }
  EXPECT_THROW(seller_first_revenues(-1.0, pareto1(1.0, 100.0), quadrature()), Error);
}

TEST(SellerFirstRevenues, UniformMatchesSimpson) {
  const auto u = BidderProfile::iid(make_uniform(0.0, 1.0), 1);
  for (double p0 : {0.0, 0.25, 0.5, 0.8}) {
    const double ref = testing::simpson(
        [&](double v) { return std::max(2.0 * v - 1.0 - p0, 0.0); }, 0.0, 1.0);
    const auto r = seller_first_revenues(p0, u, quadrature());
    EXPECT_NEAR(r.intermediary_revenue, ref, 1e-7) << p0;
    EXPECT_NEAR(r.seller_revenue, p0 * (1.0 - (1.0 + p0) / 2.0), 1e-9) << p0;
  }
}

TEST(SellerFirstRevenues, TwoBidderQuadratureAgreesWithMonteCarlo) {
  const BidderProfile mixed({make_uniform(0.0, 1.0), make_exponential(1.0, 50.0)});
  const auto q = seller_first_revenues(0.3, mixed, quadrature());
  const auto m = seller_first_revenues(0.3, mixed, monte_carlo());
  EXPECT_NEAR(q.seller_revenue, m.seller_revenue, 4.0 * m.stderr_seller);
  EXPECT_NEAR(q.intermediary_revenue, m.intermediary_revenue, 4.0 * m.stderr_intermediary);
}

TEST(OptRev, SpecPoints) {
  for (double eps : {0.25, 1.0, 2.0}) {
    EXPECT_NEAR(opt_rev(pareto1(eps, 50.0), quadrature()).value, 1.0, 1e-6) << eps;
  }
  EXPECT_NEAR(opt_rev(BidderProfile::iid(make_uniform(0.0, 1.0), 1), quadrature()).value, 0.25,
              1e-8);
  EXPECT_NEAR(opt_rev(BidderProfile::iid(make_exponential(1.0, 50.0), 1), quadrature()).value,
              std::exp(-1.0), 1e-8);
  const auto mc = opt_rev(BidderProfile::iid(make_uniform(0.0, 1.0), 1), monte_carlo());
  EXPECT_NEAR(mc.value, 0.25, 4.0 * mc.stderr);
}

TEST(OptRev, TwoUniformBiddersClosedForm) {
  // E[max(0, 2 max(v1, v2) - 1)] = int_{1/2}^1 (2x - 1) 2x dx = 5/12.
  const auto p = BidderProfile::iid(make_uniform(0.0, 1.0), 2);
  EXPECT_NEAR(opt_rev(p, quadrature()).value, 5.0 / 12.0, 1e-8);
  const auto mc = opt_rev(p, monte_carlo());
  EXPECT_NEAR(mc.value, 5.0 / 12.0, 4.0 * mc.stderr);
}

TEST(ApRev, SpecPoints) {
  const auto u = ap_rev(BidderProfile::iid(make_uniform(0.0, 1.0), 1));
  EXPECT_NEAR(u.price, 0.5, 1e-6);
  EXPECT_NEAR(u.revenue, 0.25, 1e-9);
  const auto f = ap_rev(pareto1(1.0, 100.0));
  EXPECT_NEAR(f.price, 1.0, 1e-9);
  EXPECT_NEAR(f.revenue, 1.0, 1e-9);
  const auto c = ap_rev(BidderProfile::iid(make_constant_value(2.0, 1e-6), 3));
  EXPECT_NEAR(c.price, 2.0, 1e-5);
  EXPECT_NEAR(c.revenue, 2.0, 1e-5);
}

TEST(ApRev, MatchesDenseGrid) {
  const BidderProfile mixed({make_uniform(0.0, 1.0), make_exponential(1.0, 50.0)});
  auto rev = [](double p) { return p * (1.0 - std::min(p, 1.0) * (1.0 - std::exp(-p))); };
  const double p_ref = testing::dense_argmax(rev, 0.0, 5.0, 50000);
  const auto got = ap_rev(mixed);
  EXPECT_NEAR(got.price, p_ref, 2e-4);
  EXPECT_NEAR(got.revenue, rev(p_ref), 1e-8);
}

TEST(AccessProbability, SpecPoints) {
  const auto u2 = BidderProfile::iid(make_uniform(0.0, 1.0), 2);
  EXPECT_NEAR(access_probability(0.3, 0.3, u2), 0.64, 1e-12);
  EXPECT_DOUBLE_EQ(access_probability(0.6, 0.6, u2), 0.0);
  EXPECT_NEAR(access_probability(0.0, 2.0, pareto1(1.0, 100.0)), 0.25, 1e-12);
  // Exactly at H only the atom remains.
  EXPECT_NEAR(access_probability(50.0, 50.0, pareto1(1.0, 100.0)), 1e-4, 1e-16);
  EXPECT_THROW(access_probability(-0.1, 0.0, u2), Error);
}

// Independent reading of a menu: the buyer with virtual value x takes the
// option with the largest alpha x - beta if that is nonnegative.
double menu_revenue_reference(const std::vector<MenuOption>& menu) {
  return testing::simpson(
      [&](double v) {
        const double x = 2.0 * v - 1.0;
        double best = 0.0;
        double paid = 0.0;
        bool chosen = false;
        for (const auto& o : menu) {
          const double s = o.probability * x - o.price;
          if (s >= 0.0 && (!chosen || s > best)) {
            best = s;
            paid = o.price;
            chosen = true;
          }
        }
        return paid;
      },
      0.0, 1.0, 200000);
}

TEST(RandomizedMenu, TwoOptionUniformMatchesIntegrator) {
  const std::vector<MenuOption> options{{1.0, 0.5}, {0.5, 0.2}};
  const double ref = menu_revenue_reference(options);
  EXPECT_NEAR(ref, 0.12, 1e-6);
  const auto est = randomized_menu_revenue(RandomizedMenu(options),
                                           BidderProfile::iid(make_uniform(0.0, 1.0), 1),
                                           monte_carlo());
  EXPECT_NEAR(est.value, ref, 4.0 * est.stderr);
}

TEST(RandomizedMenu, DeterministicMenuIsPostedPrice) {
  const auto profile = BidderProfile::iid(make_uniform(0.0, 1.0), 2);
  const auto cfg = monte_carlo();
  const auto sample = VirtualSurplusSample::draw(profile, cfg);
  for (double p0 : {0.1, 0.4, 0.7}) {
    const auto menu = randomized_menu_revenue(RandomizedMenu({{1.0, p0}}), sample);
    EXPECT_NEAR(menu.value, sample.revenues_at(p0).seller_revenue, 1e-12) << p0;
  }
  EXPECT_DOUBLE_EQ(randomized_menu_revenue(RandomizedMenu({{0.0, 0.0}}), sample).value, 0.0);
}

TEST(Sampling, SameSeedSameDraws) {
  const auto profile = BidderProfile::iid(make_exponential(1.0, 50.0), 3);
  const auto a = sample_max_virtual_value(profile, monte_carlo(5000));
  const auto b = sample_max_virtual_value(profile, monte_carlo(5000));
  EXPECT_EQ(a, b);
  auto other = monte_carlo(5000);
  other.seed = 100;
  EXPECT_NE(a, sample_max_virtual_value(profile, other));
}

TEST(Sampling, ShardRangesPartition) {
  std::size_t covered = 0;
  std::size_t prev_end = 0;
  for (std::size_t s = 0; s < 7; ++s) {
    const auto [b, e] = shard_range(100, 7, s);
    EXPECT_EQ(b, prev_end);
    covered += e - b;
    prev_end = e;
  }
  EXPECT_EQ(covered, 100u);
}

TEST(Sampling, IrregularProfileRejected) {
  const auto bimodal = make_table({{0.0, 0.0}, {1.0, 0.45}, {9.0, 0.55}, {10.0, 1.0}});
  try {
    seller_first_revenues(1.0, BidderProfile::iid(bimodal, 2), monte_carlo(1000));
    FAIL() << "expected NotRegular";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNotRegular);
  }
}

}  // namespace
}  // namespace intermed
