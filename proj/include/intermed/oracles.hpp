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

// Brute-force cross-checks. These deliberately avoid the enumeration and
// revenue code they are used to validate.

#ifndef INTERMED_ORACLES_HPP_
#define INTERMED_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "intermed/distribution.hpp"
#include "intermed/errors.hpp"
#include "intermed/mechanisms.hpp"
#include "intermed/revenue.hpp"
#include "intermed/rng.hpp"
#include "intermed/solvers.hpp"

namespace intermed {

namespace detail {

struct CheapestWin {
  double total = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> bids;  // grid index per slot
  std::size_t profile = 0;
};

// Depth-first walk over bid indices, slot 0 outermost.
inline void walk_profiles(const DiscreteSellerMechanism& mech, std::vector<std::size_t>& idx,
                          std::size_t slot, std::size_t flat, CheapestWin& best) {
  const std::size_t g = mech.bid_grid().size();
  if (slot == mech.slots()) {
    if (mech.winners()[flat] < 0) return;
    double total = 0.0;
    for (std::size_t j = 0; j < mech.slots(); ++j) total += mech.payment_table()[flat * mech.slots() + j];
    if (total < best.total) {
      best.total = total;
      best.bids = idx;
      best.profile = flat;
    }
    return;
  }
  for (std::size_t b = 0; b < g; ++b) {
    idx[slot] = b;
    walk_profiles(mech, idx, slot + 1, flat * g + b, best);
  }
}

inline CheapestWin cheapest_win(const DiscreteSellerMechanism& mech) {
  CheapestWin best;
  std::vector<std::size_t> idx(mech.slots(), 0);
  walk_profiles(mech, idx, 0, 0, best);
  if (!std::isfinite(best.total)) {
    throw Error(ErrorKind::kNeverSells, "no bid profile allocates the item");
  }
  return best;
}

}  // namespace detail

inline double oracle_min_payment(const DiscreteSellerMechanism& mech) {
  return detail::cheapest_win(mech).total;
}

// ---------------------------------------------------------------------------
// Full game versus its posted-price reduction, one bidder

struct DiscreteGameResult {
  double omega = 0.0;
  double full_game_seller_rev = 0.0;
  double full_game_intermediary_rev = 0.0;
  double reduced_game_seller_rev = 0.0;
  double reduced_game_intermediary_rev = 0.0;
  double max_abs_gap = 0.0;
  double stderr = 0.0;  // largest standard error among the four estimates
};

// In the full game the bidder buys the dictation right at `intermediary_price`
// when its value covers that price plus the cheapest winning payment, then
// dictates the cheapest winning bid vector; the seller collects whatever the
// mechanism charges for that vector. The reduced game replaces the mechanism
// by a posted price at omega. Both games see the same value draws.
inline DiscreteGameResult oracle_discrete_game(const DiscreteSellerMechanism& mech,
                                               double intermediary_price,
                                               const ValueDistribution& dist,
                                               const EstimatorConfig& cfg) {
  cfg.validate();
  if (!(intermediary_price >= 0.0)) {
    throw Error(ErrorKind::kDomainError, "intermediary price must be >= 0");
  }
  const auto witness = detail::cheapest_win(mech);
  double charged = 0.0;
  for (double p : mech.payments(witness.profile)) charged += p;
  const double omega = to_posted_price(mech).price;

  const double n = static_cast<double>(cfg.sample_count);
  std::vector<double> full_buys(cfg.shards, 0.0);
  std::vector<double> reduced_buys(cfg.shards, 0.0);
  for_each_shard(cfg.shards, [&](std::size_t s) {
    CounterStream stream(substream_key(cfg.seed, s));
    const auto [begin, end] = shard_range(cfg.sample_count, cfg.shards, s);
    for (std::size_t k = begin; k < end; ++k) {
      const double v = dist.quantile(stream.next_open01());
      if (v - intermediary_price - charged >= 0.0) full_buys[s] += 1.0;
      if (v >= omega + intermediary_price) reduced_buys[s] += 1.0;
    }
  });
  double full = 0.0;
  double reduced = 0.0;
  for (std::size_t s = 0; s < cfg.shards; ++s) {
    full += full_buys[s];
    reduced += reduced_buys[s];
  }
  const double qf = full / n;
  const double qr = reduced / n;
  auto se = [&](double q, double scale) {
    return cfg.sample_count > 1 ? scale * std::sqrt(q * (1.0 - q) / (n - 1.0)) : 0.0;
  };

  DiscreteGameResult out;
  out.omega = omega;
  out.full_game_seller_rev = charged * qf;
  out.full_game_intermediary_rev = intermediary_price * qf;
  out.reduced_game_seller_rev = omega * qr;
  out.reduced_game_intermediary_rev = intermediary_price * qr;
  out.max_abs_gap = std::max(std::abs(out.full_game_seller_rev - out.reduced_game_seller_rev),
                             std::abs(out.full_game_intermediary_rev -
                                      out.reduced_game_intermediary_rev));
  out.stderr = std::max({se(qf, charged), se(qf, intermediary_price), se(qr, omega),
                         se(qr, intermediary_price)});
  return out;
}

// ---------------------------------------------------------------------------
// Intermediary best response by grid search, one bidder

// argmax over r_grid of r * Pr[v >= p + r]; ties go to the smaller r.
inline double oracle_grid_br_intermediary(double p, const ValueDistribution& dist,
                                          std::span<const double> r_grid) {
  if (r_grid.empty()) throw Error(ErrorKind::kDomainError, "empty r grid");
  const double lo = dist.support_lo();
  const double hi = dist.support_hi();
  auto sells = [&](double x) {
    if (x <= lo) return 1.0;
    if (std::abs(x - hi) <= 1e-12 * std::max(1.0, hi)) return dist.atom_hi();
    if (x > hi) return 0.0;
    return 1.0 - dist.cdf(x);
  };
  double best_r = r_grid[0];
  double best = -1.0;
  for (double r : r_grid) {
    const double rev = r * sells(p + r);
    if (rev > best) {
      best = rev;
      best_r = r;
    }
  }
  return best_r;
}

// ---------------------------------------------------------------------------
// Random seller mechanisms

// Every slot has its own positive entry threshold; the highest bid among the
// slots that clear their thresholds wins (lowest slot on ties). The winner
// pays either its bid or max(threshold, best rival bid). Losers may be
// charged a fixed fraction of their own bid. Zero bids never clear a
// threshold and are never charged, so the structural rules hold by
// construction.
inline DiscreteSellerMechanism make_random_mechanism(std::uint64_t seed,
                                                     std::vector<double> grid,
                                                     std::size_t slots) {
  CounterStream rng(substream_key(seed, 0x6d656368ULL));
  if (grid.size() < 2) throw Error(ErrorKind::kInvalidMechanism, "grid needs a positive bid");
  std::vector<double> thresholds(slots);
  for (auto& t : thresholds) t = grid[1 + rng.next_below(grid.size() - 1)];
  const bool first_price = rng.next_below(2) == 0;
  const double loser_fee = rng.next_below(3) == 0 ? 0.25 * rng.next_open01() : 0.0;
  return detail::tabulate_mechanism(
      std::move(grid), slots, [&](std::span<const double> b, std::span<double> pay) {
        int w = -1;
        for (std::size_t j = 0; j < b.size(); ++j) {
          if (b[j] >= thresholds[j] && (w < 0 || b[j] > b[w])) w = static_cast<int>(j);
        }
        for (std::size_t j = 0; j < b.size(); ++j) pay[j] = loser_fee * b[j];
        if (w < 0) return -1;
        double rival = thresholds[w];
        for (std::size_t j = 0; j < b.size(); ++j) {
          if (static_cast<int>(j) != w) rival = std::max(rival, std::min(b[j], b[w]));
        }
        pay[w] = first_price ? b[w] : rival;
        return w;
      });
}

// ---------------------------------------------------------------------------
// Randomized menus never beat the best posted price

struct MenuDominanceResult {
  double max_violation = 0.0;  // largest positive excess of a menu over the posted optimum
  double violation_stderr = 0.0;  // combined stderr of the menu with the largest excess
  bool within_noise = true;       // every menu's excess is at most 4 combined stderr
  double deterministic_revenue = 0.0;
  double deterministic_p0 = 0.0;
  std::size_t menus = 0;
  std::optional<double> best_menu_price;  // price of the best single-option menu
};

struct MenuCorpusOptions {
  std::size_t max_options = 4;
  bool deterministic_only = false;  // every menu is a single (1, beta) option
};

inline std::vector<RandomizedMenu> random_menus(std::size_t count, std::uint64_t seed,
                                                double price_cap,
                                                const MenuCorpusOptions& opts = {}) {
  std::vector<RandomizedMenu> out;
  out.reserve(count);
  for (std::size_t m = 0; m < count; ++m) {
    CounterStream rng(substream_key(seed, m));
    const std::size_t k = opts.deterministic_only ? 1 : 1 + rng.next_below(opts.max_options);
    std::vector<MenuOption> options;
    for (std::size_t j = 0; j < k; ++j) {
      const double alpha = opts.deterministic_only ? 1.0 : rng.next_open01();
      options.push_back({alpha, rng.next_uniform(0.0, price_cap)});
    }
    out.emplace_back(std::move(options));
  }
  return out;
}

inline MenuDominanceResult oracle_menu_dominance(const BidderProfile& profile,
                                                 std::size_t menu_corpus_size,
                                                 std::uint64_t seed, const EstimatorConfig& cfg,
                                                 const MenuCorpusOptions& opts = {}) {
  MenuDominanceResult out;
  out.menus = menu_corpus_size;
  if (menu_corpus_size == 0) return out;
  const auto best = solve_seller_first(profile, cfg);
  out.deterministic_revenue = best.revenues.seller_revenue;
  out.deterministic_p0 = best.optimal_p0;
  const auto sample = VirtualSurplusSample::draw(profile, cfg);
  // Prices above the largest virtual value never sell.
  const double cap = best.search_hi;
  double best_single = -1.0;
  for (const auto& menu : random_menus(menu_corpus_size, seed, cap, opts)) {
    const auto est = randomized_menu_revenue(menu, sample);
    const double excess = est.value - out.deterministic_revenue;
    const double se = std::hypot(est.stderr, best.revenues.stderr_seller);
    if (excess > out.max_violation) {
      out.max_violation = excess;
      out.violation_stderr = se;
    }
    if (excess > 4.0 * se) out.within_noise = false;
    if (menu.offered() == 1 && menu.options()[0].probability == 1.0 && est.value > best_single) {
      best_single = est.value;
      out.best_menu_price = menu.options()[0].price;
    }
  }
  return out;
}

}  // namespace intermed

#endif  // INTERMED_ORACLES_HPP_
