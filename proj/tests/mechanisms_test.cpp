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

#include "intermed/mechanisms.hpp"
#include "intermed/numerics.hpp"

namespace intermed {
namespace {

std::vector<double> tenths() { return uniform_grid(0.0, 1.0, 11); }

TEST(DiscreteMechanism, LayoutIsRowMajorSlotZeroFirst) {
  const auto m = make_second_price_mechanism(tenths(), 2, 0.0);
  EXPECT_EQ(m.profile_count(), 121u);
  const auto idx = m.decode(3 * 11 + 7);
  ASSERT_EQ(idx.size(), 2u);
  EXPECT_EQ(idx[0], 3u);
  EXPECT_EQ(idx[1], 7u);
  EXPECT_EQ(m.winner(3 * 11 + 7), 1);
  EXPECT_NEAR(m.payments(3 * 11 + 7)[1], 0.3, 1e-15);
}

TEST(DiscreteMechanism, ShapeErrors) {
  EXPECT_THROW(DiscreteSellerMechanism({0.0, 1.0}, 1, {-1}, {0.0, 0.0}), Error);
  EXPECT_THROW(DiscreteSellerMechanism({0.0, 1.0}, 1, {-1, 0}, {0.0}), Error);
  EXPECT_THROW(DiscreteSellerMechanism({1.0, 0.0}, 1, {-1, 0}, {0.0, 0.0}), Error);
  EXPECT_THROW(DiscreteSellerMechanism({0.0, 1.0}, 0, {}, {}), Error);
}

TEST(DiscreteMechanism, ValidateFlagsStructuralRules) {
  // Zero bid wins and pays; nothing else sells.
  const DiscreteSellerMechanism bad({0.0, 1.0}, 1, {0, -1}, {0.5, 0.0});
  const auto v = bad.validate();
  ASSERT_GE(v.size(), 2u);
  EXPECT_EQ(v[0].rule, "zero-bids-no-allocation");
  const DiscreteSellerMechanism never({0.0, 1.0}, 1, {-1, -1}, {0.0, 0.0});
  const auto nv = never.validate();
  ASSERT_EQ(nv.size(), 1u);
  EXPECT_EQ(nv[0].rule, "sells-somewhere");
  EXPECT_TRUE(make_first_price_mechanism(tenths(), 3, 0.2).validate().empty());
}

TEST(MinAchievablePayment, SecondPriceWithReserve) {
  const auto m = make_second_price_mechanism(tenths(), 3, 0.3);
  const auto mp = min_achievable_payment(m);
  EXPECT_NEAR(mp.omega, 0.3, 1e-15);
  ASSERT_EQ(mp.witness_bids.size(), 3u);
  EXPECT_NEAR(mp.witness_bids[0], 0.3, 1e-15);
  EXPECT_DOUBLE_EQ(mp.witness_bids[1], 0.0);
  EXPECT_DOUBLE_EQ(mp.witness_bids[2], 0.0);
  EXPECT_NEAR(to_posted_price(m).price, 0.3, 1e-15);
}

TEST(MinAchievablePayment, PostedPriceIsFixpoint) {
  const auto m = make_posted_price_mechanism(tenths(), 2, 0.5);
  EXPECT_NEAR(min_achievable_payment(m).omega, 0.5, 1e-15);
  EXPECT_NEAR(to_posted_price(m).price, 0.5, 1e-15);
}

TEST(MinAchievablePayment, FirstPriceSmallestWinningBid) {
  const auto m = make_first_price_mechanism(tenths(), 2, 0.0);
  EXPECT_NEAR(min_achievable_payment(m).omega, 0.1, 1e-15);
}

TEST(MinAchievablePayment, AllPaySumsLoserPayments) {
  const auto m = make_all_pay_mechanism(tenths(), 2, 0.0);
  const auto mp = min_achievable_payment(m);
  // One bidder at 0.1 and the other at zero: total 0.1.
  EXPECT_NEAR(mp.omega, 0.1, 1e-15);
  EXPECT_NEAR(mp.witness_bids[0] + mp.witness_bids[1], 0.1, 1e-15);
}

TEST(MinAchievablePayment, NeverSells) {
  const DiscreteSellerMechanism never({0.0, 1.0}, 1, {-1, -1}, {0.0, 0.0});
  try {
    min_achievable_payment(never);
    FAIL() << "expected NeverSells";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNeverSells);
  }
}

TEST(ShiftedMyerson, Reserves) {
  const auto f = make_pareto_truncated(ParetoTruncatedParams::make(1.0, 100.0));
  EXPECT_NEAR(*build_shifted_myerson(10.0, BidderProfile::iid(f, 1)).reserves[0], 10.0, 1e-8);
  const auto u = make_uniform(0.0, 1.0);
  EXPECT_NEAR(*build_shifted_myerson(0.0, BidderProfile::iid(u, 1)).reserves[0], 0.5, 1e-8);
  const auto e = make_exponential(1.0, 50.0);
  EXPECT_NEAR(*build_shifted_myerson(0.0, BidderProfile::iid(e, 1)).reserves[0], 1.0, 1e-8);
  // phi never reaches 2 on uniform[0,1].
  EXPECT_FALSE(build_shifted_myerson(2.0, BidderProfile::iid(u, 1)).reserves[0].has_value());
  EXPECT_THROW(build_shifted_myerson(-1.0, BidderProfile::iid(u, 1)), Error);
}

TEST(ShiftedMyerson, SingleBidderPaysReserve) {
  const auto f = make_pareto_truncated(ParetoTruncatedParams::make(1.0, 100.0));
  const auto profile = BidderProfile::iid(f, 1);
  const auto mech = build_shifted_myerson(1.0, profile);
  const std::vector<double> v{30.0};
  const auto out = run_shifted_myerson(mech, v, profile);
  ASSERT_TRUE(out.winner.has_value());
  EXPECT_EQ(*out.winner, 0u);
  EXPECT_NEAR(out.intermediary_payment, 1.0, 1e-8);
  EXPECT_DOUBLE_EQ(out.seller_payment, 1.0);
}

TEST(ShiftedMyerson, NoQualifyingBidder) {
  const auto u = make_uniform(0.0, 1.0);
  const auto profile = BidderProfile::iid(u, 2);
  const auto mech = build_shifted_myerson(0.2, profile);
  const std::vector<double> v{0.3, 0.55};
  const auto out = run_shifted_myerson(mech, v, profile);
  EXPECT_FALSE(out.winner.has_value());
  EXPECT_DOUBLE_EQ(out.intermediary_payment, 0.0);
  EXPECT_DOUBLE_EQ(out.seller_payment, 0.0);
}

TEST(ShiftedMyerson, TwoBiddersSecondVirtualValuePricing) {
  // Uniform[0,1] and uniform[0,2]: phi1 = 2v - 1, phi2 = 2v - 2.
  const BidderProfile profile({make_uniform(0.0, 1.0), make_uniform(0.0, 2.0)});
  const auto mech = build_shifted_myerson(0.1, profile);
  const std::vector<double> v{0.9, 1.6};
  const auto out = run_shifted_myerson(mech, v, profile);
  ASSERT_TRUE(out.winner.has_value());
  EXPECT_EQ(*out.winner, 1u);
  // Bidder 1 must beat phi = 0.8, i.e. v = 1.4, less the seller's 0.1.
  EXPECT_NEAR(out.intermediary_payment, 1.3, 1e-8);
}

TEST(Menu, SpecChoices) {
  const auto none = menu_choice(RandomizedMenu({{1.0, 0.5}}), 0.4);
  EXPECT_FALSE(none.index.has_value());
  const auto two = menu_choice(RandomizedMenu({{1.0, 0.5}, {0.5, 0.1}}), 0.9);
  ASSERT_TRUE(two.index.has_value());
  EXPECT_EQ(*two.index, 0u);
  EXPECT_NEAR(two.surplus, 0.4, 1e-15);
  const RandomizedMenu null_menu({{0.0, 0.0}});
  EXPECT_FALSE(null_menu.opt_out_appended());
  const auto n = menu_choice(null_menu, 3.0);
  ASSERT_TRUE(n.index.has_value());
  EXPECT_EQ(*n.index, 0u);
  EXPECT_DOUBLE_EQ(n.surplus, 0.0);
}

TEST(Menu, RejectsInvalidOptions) {
  EXPECT_THROW(RandomizedMenu({{1.5, 0.1}}), Error);
  EXPECT_THROW(RandomizedMenu({{0.5, -0.1}}), Error);
}

}  // namespace
}  // namespace intermed
