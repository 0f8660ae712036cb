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

// Seller and intermediary mechanisms and their execution on realized values.

#ifndef INTERMED_MECHANISMS_HPP_
#define INTERMED_MECHANISMS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "intermed/distribution.hpp"
#include "intermed/errors.hpp"

namespace intermed {

struct PostedPrice {
  double price = 0.0;
};

struct MechanismViolation {
  std::string rule;
  std::optional<std::size_t> profile_index;
  std::string message;
};

// A deterministic seller mechanism over a finite bid grid. Every slot bids
// from the same grid; bid profiles are stored row-major with slot 0 the most
// significant digit. winners[k] is the allocated slot (or -1) and
// payments[k * slots + j] is what slot j is charged.
class DiscreteSellerMechanism {
 public:
  DiscreteSellerMechanism(std::vector<double> bid_grid, std::size_t slots,
                          std::vector<int> winners, std::vector<double> payments)
      : grid_(std::move(bid_grid)),
        slots_(slots),
        winners_(std::move(winners)),
        payments_(std::move(payments)) {
    if (slots_ == 0) throw Error(ErrorKind::kInvalidMechanism, "mechanism needs >= 1 slot");
    if (grid_.empty()) throw Error(ErrorKind::kInvalidMechanism, "empty bid grid");
    for (std::size_t i = 0; i < grid_.size(); ++i) {
      if (!std::isfinite(grid_[i]) || grid_[i] < 0.0 || (i > 0 && !(grid_[i] > grid_[i - 1]))) {
        throw Error(ErrorKind::kInvalidMechanism,
                    "bid grid must be finite, nonnegative and strictly increasing (entry " +
                        std::to_string(i) + ")");
      }
    }
    if (grid_.front() != 0.0) throw Error(ErrorKind::kInvalidMechanism, "bid grid must contain 0");
    profiles_ = 1;
    for (std::size_t s = 0; s < slots_; ++s) {
      if (profiles_ > (std::size_t{1} << 24) / grid_.size()) {
        throw Error(ErrorKind::kInvalidMechanism, "bid table too large to enumerate");
      }
      profiles_ *= grid_.size();
    }
    if (winners_.size() != profiles_) {
      throw Error(ErrorKind::kInvalidMechanism,
                  "allocation table has " + std::to_string(winners_.size()) +
                      " entries, expected " + std::to_string(profiles_));
    }
    if (payments_.size() != profiles_ * slots_) {
      throw Error(ErrorKind::kInvalidMechanism,
                  "payment table has " + std::to_string(payments_.size()) +
                      " entries, expected " + std::to_string(profiles_ * slots_));
    }
    for (std::size_t k = 0; k < profiles_; ++k) {
      if (winners_[k] < -1 || winners_[k] >= static_cast<int>(slots_)) {
        throw Error(ErrorKind::kInvalidMechanism,
                    "winner out of range at profile " + std::to_string(k));
      }
    }
    for (std::size_t k = 0; k < payments_.size(); ++k) {
      if (!std::isfinite(payments_[k]) || payments_[k] < 0.0) {
        throw Error(ErrorKind::kInvalidMechanism,
                    "negative or non-finite payment at profile " + std::to_string(k / slots_) +
                        ", slot " + std::to_string(k % slots_));
      }
    }
  }

  std::size_t slots() const { return slots_; }
  std::size_t profile_count() const { return profiles_; }
  std::span<const double> bid_grid() const { return grid_; }
  int winner(std::size_t profile) const { return winners_[profile]; }
  std::span<const double> payments(std::size_t profile) const {
    return std::span<const double>(payments_).subspan(profile * slots_, slots_);
  }
  std::span<const int> winners() const { return winners_; }
  std::span<const double> payment_table() const { return payments_; }

  double total_payment(std::size_t profile) const {
    double total = 0.0;
    for (double p : payments(profile)) total += p;
    return total;
  }

  std::vector<std::size_t> decode(std::size_t profile) const {
    std::vector<std::size_t> idx(slots_);
    for (std::size_t s = slots_; s-- > 0;) {
      idx[s] = profile % grid_.size();
      profile /= grid_.size();
    }
    return idx;
  }

  std::vector<double> bids(std::size_t profile) const {
    std::vector<double> out;
    out.reserve(slots_);
    for (std::size_t i : decode(profile)) out.push_back(grid_[i]);
    return out;
  }

  // The two structural rules every seller mechanism must obey: it sells for
  // some bid profile, and the all-zero profile neither allocates nor charges.
  std::vector<MechanismViolation> validate() const {
    std::vector<MechanismViolation> out;
    if (winners_[0] != -1) {
      out.push_back({"zero-bids-no-allocation", 0, "all-zero bid profile allocates the item"});
    }
    for (std::size_t j = 0; j < slots_; ++j) {
      if (payments_[j] != 0.0) {
        out.push_back({"zero-bids-no-payment", 0,
                       "all-zero bid profile charges slot " + std::to_string(j)});
      }
    }
    if (std::none_of(winners_.begin(), winners_.end(), [](int w) { return w >= 0; })) {
      out.push_back({"sells-somewhere", std::nullopt, "no bid profile allocates the item"});
    }
    return out;
  }

 private:
  std::vector<double> grid_;
  std::size_t slots_;
  std::vector<int> winners_;
  std::vector<double> payments_;
  std::size_t profiles_ = 0;
};

namespace detail {

template <typename Rule>
DiscreteSellerMechanism tabulate_mechanism(std::vector<double> grid, std::size_t slots,
                                           Rule&& rule) {
  std::size_t profiles = 1;
  for (std::size_t s = 0; s < slots; ++s) profiles *= grid.size();
  std::vector<int> winners(profiles, -1);
  std::vector<double> payments(profiles * slots, 0.0);
  std::vector<double> bids(slots);
  for (std::size_t k = 0; k < profiles; ++k) {
    std::size_t rest = k;
    for (std::size_t s = slots; s-- > 0;) {
      bids[s] = grid[rest % grid.size()];
      rest /= grid.size();
    }
    winners[k] = rule(std::span<const double>(bids),
                      std::span<double>(payments).subspan(k * slots, slots));
  }
  return DiscreteSellerMechanism(std::move(grid), slots, std::move(winners), std::move(payments));
}

// Highest positive bid at or above the reserve; lowest slot on ties.
inline int highest_eligible(std::span<const double> bids, double reserve) {
  int best = -1;
  for (std::size_t j = 0; j < bids.size(); ++j) {
    if (bids[j] > 0.0 && bids[j] >= reserve && (best < 0 || bids[j] > bids[best])) {
      best = static_cast<int>(j);
    }
  }
  return best;
}

}  // namespace detail

inline DiscreteSellerMechanism make_second_price_mechanism(std::vector<double> grid,
                                                           std::size_t slots, double reserve) {
  return detail::tabulate_mechanism(std::move(grid), slots,
                                    [reserve](std::span<const double> b, std::span<double> pay) {
                                      const int w = detail::highest_eligible(b, reserve);
                                      if (w < 0) return -1;
                                      double second = reserve;
                                      for (std::size_t j = 0; j < b.size(); ++j) {
                                        if (static_cast<int>(j) != w) second = std::max(second, b[j]);
                                      }
                                      pay[w] = second;
                                      return w;
                                    });
}

inline DiscreteSellerMechanism make_first_price_mechanism(std::vector<double> grid,
                                                          std::size_t slots, double reserve) {
  return detail::tabulate_mechanism(std::move(grid), slots,
                                    [reserve](std::span<const double> b, std::span<double> pay) {
                                      const int w = detail::highest_eligible(b, reserve);
                                      if (w >= 0) pay[w] = b[w];
                                      return w;
                                    });
}

// Every slot pays its own bid, winner or not.
inline DiscreteSellerMechanism make_all_pay_mechanism(std::vector<double> grid,
                                                      std::size_t slots, double reserve) {
  return detail::tabulate_mechanism(std::move(grid), slots,
                                    [reserve](std::span<const double> b, std::span<double> pay) {
                                      const int w = detail::highest_eligible(b, reserve);
                                      std::copy(b.begin(), b.end(), pay.begin());
                                      return w;
                                    });
}

// The lowest slot bidding at least `price` buys at `price`.
inline DiscreteSellerMechanism make_posted_price_mechanism(std::vector<double> grid,
                                                           std::size_t slots, double price) {
  return detail::tabulate_mechanism(std::move(grid), slots,
                                    [price](std::span<const double> b, std::span<double> pay) {
                                      for (std::size_t j = 0; j < b.size(); ++j) {
                                        if (b[j] > 0.0 && b[j] >= price) {
                                          pay[j] = price;
                                          return static_cast<int>(j);
                                        }
                                      }
                                      return -1;
                                    });
}

struct MinimumPayment {
  double omega = 0.0;
  std::vector<double> witness_bids;
  std::size_t witness_profile = 0;
};

// Cheapest total payment over bid profiles that allocate the item. Ties are
// broken toward the colexicographically smallest profile (compare the last
// slot first), which puts a single winning bid in slot 0.
inline MinimumPayment min_achievable_payment(const DiscreteSellerMechanism& mech) {
  std::optional<std::size_t> best;
  double best_total = 0.0;
  std::vector<std::size_t> best_idx;
  for (std::size_t k = 0; k < mech.profile_count(); ++k) {
    if (mech.winner(k) < 0) continue;
    const double total = mech.total_payment(k);
    const double tie_tol = 1e-12 * std::max(1.0, std::abs(best_total));
    if (!best || total < best_total - tie_tol) {
      best = k;
      best_total = total;
      best_idx = mech.decode(k);
      continue;
    }
    if (std::abs(total - best_total) <= tie_tol) {
      const auto idx = mech.decode(k);
      if (std::lexicographical_compare(idx.rbegin(), idx.rend(), best_idx.rbegin(),
                                       best_idx.rend())) {
        best = k;
        best_idx = idx;
      }
    }
  }
  if (!best) throw Error(ErrorKind::kNeverSells, "no bid profile allocates the item");
  return {best_total, mech.bids(*best), *best};
}

inline PostedPrice to_posted_price(const DiscreteSellerMechanism& mech) {
  return {min_achievable_payment(mech).omega};
}

// ---------------------------------------------------------------------------
// Intermediary best response to a posted price

// Myerson's auction on values shifted down by the seller's price p0: bidder i
// is served only if phi_i(v_i) >= p0, so its personalized reserve on the
// shifted scale is phi_i^{-1}(p0) - p0. A missing reserve means phi_i never
// reaches p0 and the bidder is never served.
struct ShiftedMyersonMechanism {
  double base_price = 0.0;
  std::vector<std::optional<double>> reserves;
  double tolerance = kDefaultInversionTol;
};

inline ShiftedMyersonMechanism build_shifted_myerson(double p0, const BidderProfile& profile,
                                                     double tol = kDefaultInversionTol) {
  if (!(p0 >= 0.0)) throw Error(ErrorKind::kDomainError, "seller price must be >= 0");
  ShiftedMyersonMechanism mech;
  mech.base_price = p0;
  mech.tolerance = tol;
  for (const auto& dist : profile.distributions()) {
    const auto threshold = inverse_virtual_value(dist, p0, tol);
    mech.reserves.push_back(threshold ? std::optional<double>(*threshold - p0) : std::nullopt);
  }
  return mech;
}

struct AuctionOutcome {
  std::optional<std::size_t> winner;
  double intermediary_payment = 0.0;
  double seller_payment = 0.0;
};

inline AuctionOutcome run_shifted_myerson(const ShiftedMyersonMechanism& mech,
                                          std::span<const double> values,
                                          const BidderProfile& profile) {
  if (values.size() != profile.size() || mech.reserves.size() != profile.size()) {
    throw Error(ErrorKind::kDomainError, "value vector does not match the profile size");
  }
  std::vector<double> phi(values.size());
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < values.size(); ++i) {
    phi[i] = virtual_value(profile[i], values[i]);
    if (!mech.reserves[i] || phi[i] < mech.base_price) continue;
    if (!best || phi[i] > phi[*best]) best = i;
  }
  AuctionOutcome out;
  if (!best) return out;
  double competition = mech.base_price;
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (j != *best) competition = std::max(competition, phi[j]);
  }
  const auto threshold = inverse_virtual_value(profile[*best], competition, mech.tolerance);
  out.winner = best;
  out.seller_payment = mech.base_price;
  out.intermediary_payment = std::max(threshold.value_or(values[*best]) - mech.base_price, 0.0);
  return out;
}

// ---------------------------------------------------------------------------
// Randomized seller menus

struct MenuOption {
  double probability = 0.0;  // chance of receiving the item
  double price = 0.0;        // minimum price for that chance
};

// A menu of (probability, price) options. The opt-out (0, 0) is appended when
// the caller did not offer it.
class RandomizedMenu {
 public:
  explicit RandomizedMenu(std::vector<MenuOption> options) : options_(std::move(options)) {
    for (std::size_t j = 0; j < options_.size(); ++j) {
      const auto& o = options_[j];
      if (!(o.probability >= 0.0 && o.probability <= 1.0) || !(o.price >= 0.0) ||
          !std::isfinite(o.price)) {
        throw Error(ErrorKind::kDomainError, "menu option " + std::to_string(j) + " is invalid");
      }
    }
    offered_ = options_.size();
    const bool has_null = std::any_of(options_.begin(), options_.end(), [](const MenuOption& o) {
      return o.probability == 0.0 && o.price == 0.0;
    });
    if (!has_null) options_.push_back({0.0, 0.0});
  }

  std::span<const MenuOption> options() const { return options_; }
  std::size_t offered() const { return offered_; }
  bool opt_out_appended() const { return options_.size() > offered_; }

 private:
  std::vector<MenuOption> options_;
  std::size_t offered_ = 0;
};

struct MenuChoice {
  std::optional<std::size_t> index;
  double surplus = 0.0;
};

// Option maximizing probability * vbar - price among the offered options
// (lowest index on ties); empty when the buyer prefers to opt out.
inline MenuChoice menu_choice(const RandomizedMenu& menu, double vbar) {
  const auto opts = menu.options();
  std::size_t best = 0;
  double best_surplus = opts[0].probability * vbar - opts[0].price;
  for (std::size_t j = 1; j < opts.size(); ++j) {
    const double s = opts[j].probability * vbar - opts[j].price;
    if (s > best_surplus) {
      best = j;
      best_surplus = s;
    }
  }
  if (best_surplus < 0.0 || best >= menu.offered()) return {std::nullopt, 0.0};
  return {best, best_surplus};
}

}  // namespace intermed

#endif  // INTERMED_MECHANISMS_HPP_
