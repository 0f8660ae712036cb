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

// Best responses and equilibria for the three timing models: the seller
// leads, the intermediary leads, or both post prices simultaneously.

#ifndef INTERMED_SOLVERS_HPP_
#define INTERMED_SOLVERS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "intermed/distribution.hpp"
#include "intermed/errors.hpp"
#include "intermed/mechanisms.hpp"
#include "intermed/numerics.hpp"
#include "intermed/revenue.hpp"

namespace intermed {

// ---------------------------------------------------------------------------
// Seller moves first

struct SellerFirstOptions {
  std::size_t grid_points = 256;
  double rel_tol = 1e-4;
  // Start the price search at the lowest support point instead of the lowest
  // nonnegative virtual value. Prices below the support can be strictly
  // better for the seller (the intermediary then sells to every type), so
  // this only exists to reproduce searches that never look there.
  bool restrict_to_support = false;
};

struct SellerFirstSolution {
  double optimal_p0 = 0.0;
  GameRevenues revenues;
  ShiftedMyersonMechanism intermediary_mechanism;
  double search_lo = 0.0;
  double search_hi = 0.0;
  MaximizeResult search;
  // Moving p0 by one or two local grid steps gains at most 4 stderr.
  bool perturbation_stable = false;
};

inline SellerFirstSolution solve_seller_first(const BidderProfile& profile,
                                              const EstimatorConfig& cfg,
                                              const SellerFirstOptions& opts = {}) {
  const SellerFirstEvaluator eval(profile, cfg);
  double lo = profile.min_lo();
  double hi = 0.0;
  std::vector<double> anchors;
  for (const auto& d : profile.distributions()) {
    const double phi_lo = detail::virtual_value_extended(d, d.support_lo());
    if (!opts.restrict_to_support) lo = std::min(lo, std::max(phi_lo, 0.0));
    hi = std::max(hi, detail::virtual_value_extended(d, d.support_hi()));
    anchors.insert(anchors.end(), {phi_lo, virtual_value_below_upper(d), d.support_lo(),
                                   d.support_hi()});
  }
  SellerFirstSolution out;
  out.search_lo = lo;
  out.search_hi = hi;
  const auto grid = hybrid_grid(lo, hi, opts.grid_points, anchors);
  out.search = maximize_on_grid([&](double p) { return eval.seller_revenue(p); }, grid,
                                opts.rel_tol);
  out.optimal_p0 = out.search.argmax;
  out.revenues = eval.revenues(out.optimal_p0);
  out.intermediary_mechanism = build_shifted_myerson(out.optimal_p0, profile);

  const auto at = std::lower_bound(grid.begin(), grid.end(), out.optimal_p0);
  const std::size_t k = std::min<std::size_t>(at - grid.begin(), grid.size() - 1);
  const std::size_t j = std::max<std::size_t>(k, 1);
  const double step = grid.size() > 1 ? grid[j] - grid[j - 1] : 0.0;
  out.perturbation_stable = true;
  for (double shift : {-2.0, -1.0, 1.0, 2.0}) {
    const double p = out.optimal_p0 + shift * step;
    if (p < 0.0) continue;
    const double gain = eval.seller_revenue(p) - out.revenues.seller_revenue;
    if (gain > 4.0 * out.revenues.stderr_seller + 1e-12) out.perturbation_stable = false;
  }
  return out;
}

// Intermediary best response and both revenues on F_{eps,H} when the seller
// posts p. Above the support floor the intermediary posts min(p/eps, H - p);
// below it, posting 1 - p (sell to every type) wins whenever p < eps/(1+eps).
struct ParetoSellerFirstPoint {
  double r_star = 0.0;
  double seller_revenue = 0.0;
  double intermediary_revenue = 0.0;
};

inline ParetoSellerFirstPoint seller_first_closed_form_fEH(const ParetoTruncatedParams& params,
                                                           double p) {
  if (!(p >= 0.0)) throw Error(ErrorKind::kDomainError, "price must be >= 0");
  const double eps = params.epsilon;
  const double h = params.h;
  ParetoSellerFirstPoint out;
  if (p > h) return out;
  out.r_star = std::max({1.0 - p, std::min(p / eps, h - p), 0.0});
  const double total = out.r_star + p;
  const double sale = total <= 1.0 ? 1.0 : std::pow(total, -(1.0 + eps));
  out.seller_revenue = p * sale;
  out.intermediary_revenue = out.r_star * sale;
  return out;
}

// ---------------------------------------------------------------------------
// Intermediary moves first (anonymous posted price r)

struct IntermediaryFirstOptions {
  std::size_t grid_points = 256;
  double rel_tol = 1e-6;
};

struct IntermediaryFirstSolution {
  double optimal_r = 0.0;
  double seller_br_price = 0.0;
  GameRevenues revenues;
  // Seller price from the first-order condition phi_{F^n}^{-1}(r) - r and
  // whether the grid search landed on it.
  std::optional<double> first_order_price;
  bool first_order_agrees = false;
  MaximizeResult search;
};

inline MaximizeResult seller_best_response_price(double r, const BidderProfile& profile,
                                                 std::size_t grid_points, double rel_tol) {
  const double top = profile.max_hi() - r;
  if (!(top > 0.0)) return {};
  const auto grid = hybrid_grid(0.0, top, grid_points, support_anchors(profile, r));
  return maximize_on_grid([&](double p) { return p * access_probability(r, p, profile); }, grid,
                          rel_tol);
}

inline IntermediaryFirstSolution solve_intermediary_first(
    const BidderProfile& profile, const IntermediaryFirstOptions& opts = {}) {
  require_regular(profile);
  auto leader_revenue = [&](double r) {
    const auto br = seller_best_response_price(r, profile, opts.grid_points, opts.rel_tol);
    return r * access_probability(r, br.argmax, profile);
  };
  const auto grid =
      hybrid_grid(0.0, profile.max_hi(), opts.grid_points, support_anchors(profile));
  IntermediaryFirstSolution out;
  out.search = maximize_on_grid(leader_revenue, grid, opts.rel_tol);
  out.optimal_r = out.search.argmax;
  out.seller_br_price =
      seller_best_response_price(out.optimal_r, profile, opts.grid_points, opts.rel_tol).argmax;
  const double b = access_probability(out.optimal_r, out.seller_br_price, profile);
  out.revenues.method = Method::kClosedForm;
  out.revenues.sale_probability = b;
  out.revenues.seller_revenue = out.seller_br_price * b;
  out.revenues.intermediary_revenue = out.optimal_r * b;

  if (profile.iid()) {
    const auto fmax = max_distribution(profile[0], static_cast<int>(profile.size()));
    if (const auto v = inverse_virtual_value(fmax, out.optimal_r)) {
      out.first_order_price = std::max(*v - out.optimal_r, 0.0);
      const double foc_rev =
          *out.first_order_price * access_probability(out.optimal_r, *out.first_order_price, profile);
      out.first_order_agrees =
          std::abs(foc_rev - out.revenues.seller_revenue) <=
          1e-6 * std::max(out.revenues.seller_revenue, 1e-12);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Simultaneous moves, single bidder

struct EquilibriumPoint {
  double p = 0.0;
  double r = 0.0;
  double seller_revenue = 0.0;
  double intermediary_revenue = 0.0;
  bool certified = false;  // survives the 2x finer re-check within 2 * tol
};

struct EquilibriumSet {
  std::vector<EquilibriumPoint> points;
  std::optional<std::pair<double, double>> band;
  double tolerance = 0.0;
  double grid_step = 0.0;
  // Any p >= hi paired with any r >= hi never trades and is trivially stable;
  // such no-trade profiles are excluded from `points`.
  bool no_trade_equilibria = false;

  double max_revenue() const {
    double m = 0.0;
    for (const auto& e : points) m = std::max({m, e.seller_revenue, e.intermediary_revenue});
    return m;
  }
};

namespace detail {

// best[k] = max_x x * Pr[v >= x + grid[k]]. The game is symmetric in the
// two prices, so this is the best reply value for either player.
inline std::vector<double> best_reply_values(const ValueDistribution& dist,
                                             std::span<const double> grid) {
  std::vector<double> best(grid.size(), 0.0);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    for (double x : grid) best[k] = std::max(best[k], x * dist.survival(x + grid[k]));
  }
  return best;
}

inline bool is_mutual_best_response(double p, double r, double best_seller,
                                     double best_intermediary, double sale, double tol) {
  const double sr = p * sale;
  const double ir = r * sale;
  return best_seller - sr <= tol * (sr + 1e-12) && best_intermediary - ir <= tol * (ir + 1e-12);
}

}  // namespace detail

inline EquilibriumSet solve_simultaneous_single_bidder(const ValueDistribution& dist,
                                                       std::size_t grid_size = 401,
                                                       double tol = 1e-6) {
  if (grid_size < 3) throw Error(ErrorKind::kDomainError, "grid_size must be >= 3");
  require_regular(BidderProfile({dist}));
  const double hi = dist.support_hi();
  const auto grid = uniform_grid(0.0, hi, grid_size);
  const auto fine = uniform_grid(0.0, hi, 2 * grid_size - 1);
  const auto best = detail::best_reply_values(dist, grid);

  EquilibriumSet out;
  out.tolerance = tol;
  out.grid_step = grid[1] - grid[0];
  out.no_trade_equilibria = true;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const double p = grid[i];
      const double r = grid[j];
      if (p + r > hi && !dist.at_upper(p + r)) continue;
      const double sale = dist.survival(p + r);
      if (!detail::is_mutual_best_response(p, r, best[j], best[i], sale, tol)) {
        continue;
      }
      EquilibriumPoint e{p, r, p * sale, r * sale, false};
      double best_s = 0.0;
      double best_i = 0.0;
      for (double x : fine) {
        best_s = std::max(best_s, x * dist.survival(x + r));
        best_i = std::max(best_i, x * dist.survival(p + x));
      }
      e.certified = detail::is_mutual_best_response(p, r, best_s, best_i, sale, 2.0 * tol);
      out.points.push_back(e);
    }
  }
  if (dist.family() == "pareto_truncated") {
    const double eps = *dist.param("epsilon");
    out.band = std::pair{hi / (1.0 + 1.0 / eps), hi / (1.0 + eps)};
  }
  return out;
}

// ---------------------------------------------------------------------------
// F_{eps,H} closed forms

struct RevenueGap {
  double sim_max_rev = 0.0;
  double stackelberg_min_rev = 0.0;
  double ratio = 0.0;
};

inline RevenueGap equilibrium_revenue_gap_fEH(const ParetoTruncatedParams& params) {
  const auto checked = ParetoTruncatedParams::make(params.epsilon, params.h, true);
  const double eps = checked.epsilon;
  RevenueGap out;
  out.sim_max_rev = std::pow(checked.h, -eps);
  out.stackelberg_min_rev = std::pow(1.0 + 1.0 / eps, -(1.0 + eps));
  out.ratio = out.sim_max_rev / out.stackelberg_min_rev;
  return out;
}

// The same three quantities measured by the solvers: the best revenue of any
// trading simultaneous equilibrium, and the smaller leader revenue of the two
// sequential games.
struct NumericRevenueGap {
  RevenueGap gap;
  EquilibriumSet equilibria;
  SellerFirstSolution seller_first;
  IntermediaryFirstSolution intermediary_first;
};

inline NumericRevenueGap equilibrium_revenue_gap_numeric(const ParetoTruncatedParams& params,
                                                         const EstimatorConfig& cfg,
                                                         std::size_t grid_size = 401,
                                                         double tol = 1e-6) {
  const auto dist = make_pareto_truncated(params);
  const auto profile = BidderProfile({dist});
  NumericRevenueGap out;
  out.equilibria = solve_simultaneous_single_bidder(dist, grid_size, tol);
  out.seller_first = solve_seller_first(profile, cfg);
  out.intermediary_first = solve_intermediary_first(profile);
  out.gap.sim_max_rev = out.equilibria.max_revenue();
  out.gap.stackelberg_min_rev = std::min(out.seller_first.revenues.seller_revenue,
                                         out.intermediary_first.revenues.intermediary_revenue);
  out.gap.ratio = out.gap.sim_max_rev / out.gap.stackelberg_min_rev;
  return out;
}

// Witness H used for the tightness checks: ten times the separation threshold.
inline double witness_h(double epsilon) {
  return 10.0 * ParetoTruncatedParams::separation_threshold(epsilon);
}

struct LowerBoundCheck {
  double c_alpha = 0.0;
  double witness_epsilon = 0.0;
  double witness_h = 0.0;
  double observed_seller_revenue = 0.0;
  double observed_opt_rev = 0.0;
  double stderr = 0.0;
  bool tight = false;  // observed revenue within max(1e-3, 4 stderr) of c(alpha) * OptRev
};

inline LowerBoundCheck corollary_lower_bound(double alpha, const EstimatorConfig& cfg = {},
                                             const SellerFirstOptions& opts = {}) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorKind::kDomainError, "alpha must lie in (0, 1)");
  }
  LowerBoundCheck out;
  out.c_alpha = c_alpha(alpha);
  out.witness_epsilon = alpha / (1.0 - alpha);
  out.witness_h = witness_h(out.witness_epsilon);
  const auto profile = BidderProfile(
      {make_pareto_truncated(ParetoTruncatedParams::make(out.witness_epsilon, out.witness_h, true))});
  const auto sol = solve_seller_first(profile, cfg, opts);
  const auto opt = opt_rev(profile, cfg);
  out.observed_seller_revenue = sol.revenues.seller_revenue;
  out.observed_opt_rev = opt.value;
  out.stderr = sol.revenues.stderr_seller;
  out.tight = std::abs(out.observed_seller_revenue - out.c_alpha * out.observed_opt_rev) <=
              std::max(1e-3, 4.0 * out.stderr);
  return out;
}

}  // namespace intermed

#endif  // INTERMED_SOLVERS_HPP_
