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

// Registered experiments. Each claim runs a scaled experiment and reports a
// list of checks (expected vs observed with a tolerance); `info` checks are
// diagnostics that never fail.

#ifndef INTERMED_CLAIMS_HPP_
#define INTERMED_CLAIMS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "intermed/distribution.hpp"
#include "intermed/io.hpp"
#include "intermed/mechanisms.hpp"
#include "intermed/numerics.hpp"
#include "intermed/oracles.hpp"
#include "intermed/revenue.hpp"
#include "intermed/solvers.hpp"

namespace intermed {

enum class CheckKind { kEqual, kAtLeast, kAtMost, kInfo };

inline std::string_view to_string(CheckKind k) {
  switch (k) {
    case CheckKind::kEqual: return "equal";
    case CheckKind::kAtLeast: return "at_least";
    case CheckKind::kAtMost: return "at_most";
    case CheckKind::kInfo: return "info";
  }
  return "unknown";
}

struct ClaimCheck {
  std::string label;
  CheckKind kind = CheckKind::kEqual;
  double expected = 0.0;
  double observed = 0.0;
  double tolerance = 0.0;
  bool pass = true;
};

struct ClaimReport {
  std::string claim_id;
  std::string description;
  std::vector<ClaimCheck> checks;
  std::vector<RevenueRow> rows;
  bool oracle = false;  // the checks compare against a brute-force oracle

  bool pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const ClaimCheck& c) { return c.pass; });
  }

  void equal(std::string label, double expected, double observed, double tol) {
    checks.push_back({std::move(label), CheckKind::kEqual, expected, observed, tol,
                      std::abs(observed - expected) <= tol});
  }
  void at_least(std::string label, double bound, double observed, double tol) {
    checks.push_back({std::move(label), CheckKind::kAtLeast, bound, observed, tol,
                      observed >= bound - tol});
  }
  void at_most(std::string label, double bound, double observed, double tol) {
    checks.push_back({std::move(label), CheckKind::kAtMost, bound, observed, tol,
                      observed <= bound + tol});
  }
  void info(std::string label, double observed, double reference = 0.0) {
    checks.push_back({std::move(label), CheckKind::kInfo, reference, observed, 0.0, true});
  }
};

struct ClaimOptions {
  EstimatorConfig estimator;
  std::optional<double> epsilon;
  std::optional<double> h;
  std::optional<std::string> dist;
  std::optional<int> n;
};

struct ClaimSpec {
  std::string id;
  std::string description;
  std::function<ClaimReport(const ClaimOptions&)> run;
};

namespace claims {

inline constexpr double kE = std::numbers::e;

inline std::string label(std::string_view what, double eps) {
  return std::string(what) + " eps=" + format_number(eps);
}

inline double separation_revenue(double eps) { return std::pow(1.0 + 1.0 / eps, -(1.0 + eps)); }

// (epsilon, H) instances for the separation claims: the default sweep, or the
// single instance given on the command line.
inline std::vector<ParetoTruncatedParams> separation_instances(const ClaimOptions& o) {
  std::vector<double> eps = {0.25, 0.5, 1.0, 2.0};
  if (o.epsilon) eps = {*o.epsilon};
  std::vector<ParetoTruncatedParams> out;
  for (double e : eps) out.push_back(ParetoTruncatedParams::make(e, o.h.value_or(witness_h(e)), true));
  return out;
}

inline ClaimReport seller_first_separation(const ClaimOptions& o) {
  ClaimReport rep;
  for (const auto& params : separation_instances(o)) {
    const double eps = params.epsilon;
    const auto profile = BidderProfile({make_pareto_truncated(params)});
    const auto sol = solve_seller_first(profile, o.estimator);
    const auto opt = opt_rev(profile, o.estimator);
    const double se = sol.revenues.stderr_seller;
    rep.equal(label("seller revenue", eps), separation_revenue(eps), sol.revenues.seller_revenue,
              std::max(1e-3, 4.0 * se));
    rep.equal(label("OptRev", eps), 1.0, opt.value, 1e-2);
    rep.info(label("optimal p0", eps), sol.optimal_p0);
    SellerFirstOptions floor_only;
    floor_only.restrict_to_support = true;
    const auto restricted = solve_seller_first(profile, o.estimator, floor_only);
    rep.info(label("seller revenue, search from support floor", eps),
             restricted.revenues.seller_revenue, separation_revenue(eps));
    rep.info(label("seller revenue at p0=eps/(1+eps), closed form", eps),
             seller_first_closed_form_fEH(params, params.alpha()).seller_revenue);
    rep.rows.push_back({"pareto_eps" + format_number(eps) + "_H" + format_number(params.h),
                        "seller_first", sol.optimal_p0, sol.revenues});
  }
  return rep;
}

inline ClaimReport second_mover_revenue(const ClaimOptions& o) {
  ClaimReport rep;
  for (const auto& params : separation_instances(o)) {
    const double eps = params.epsilon;
    const auto profile = BidderProfile({make_pareto_truncated(params)});
    const auto sol = solve_seller_first(profile, o.estimator);
    rep.equal(label("intermediary revenue", eps), separation_revenue(eps) / eps,
              sol.revenues.intermediary_revenue,
              std::max(1e-3, 4.0 * sol.revenues.stderr_intermediary));
    SellerFirstOptions floor_only;
    floor_only.restrict_to_support = true;
    const auto restricted = solve_seller_first(profile, o.estimator, floor_only);
    rep.info(label("intermediary revenue, search from support floor", eps),
             restricted.revenues.intermediary_revenue, separation_revenue(eps) / eps);
  }
  return rep;
}

inline ClaimReport intermediary_br_oracle(const ClaimOptions& o) {
  ClaimReport rep;
  rep.oracle = true;
  for (const auto& params : separation_instances(o)) {
    const auto dist = make_pareto_truncated(params);
    const auto r_grid = uniform_grid(0.0, params.h, 50001);
    const double step = r_grid[1] - r_grid[0];
    double worst = 0.0;
    for (double p : uniform_grid(1.0, params.h, 50)) {
      const double formula = std::min(p / params.epsilon, params.h - p);
      worst = std::max(worst, std::abs(oracle_grid_br_intermediary(p, dist, r_grid) - formula) / step);
    }
    rep.at_most(label("max |oracle r - min(p/eps, H-p)| in grid steps", params.epsilon), 2.0,
                worst, 0.0);
  }
  return rep;
}

inline ClaimReport strong_regularity_tightness(const ClaimOptions& o) {
  ClaimReport rep;
  for (double alpha : {0.25, 1.0 / 3.0, 0.5}) {
    const auto check = corollary_lower_bound(alpha, o.estimator);
    const std::string tag = "alpha=" + format_number(alpha);
    rep.equal("seller revenue vs c(alpha)*OptRev " + tag, check.c_alpha * check.observed_opt_rev,
              check.observed_seller_revenue, std::max(1e-3, 4.0 * check.stderr));
    SellerFirstOptions floor_only;
    floor_only.restrict_to_support = true;
    const auto restricted = corollary_lower_bound(alpha, o.estimator, floor_only);
    rep.info("seller revenue, search from support floor " + tag,
             restricted.observed_seller_revenue, check.c_alpha * check.observed_opt_rev);
  }
  return rep;
}

struct Corpus {
  std::string name;
  BidderProfile profile;
  double alpha;
};

inline ClaimReport posted_price_guarantee(const ClaimOptions& o) {
  ClaimReport rep;
  const auto uniform = make_uniform(0.0, 1.0);
  const auto expo = make_exponential(1.0, 50.0);
  std::vector<Corpus> iid;
  for (std::size_t n : {1, 3, 5}) iid.push_back({"uniform n=" + std::to_string(n), BidderProfile::iid(uniform, n), 1.0});
  for (std::size_t n : {1, 3}) iid.push_back({"exponential n=" + std::to_string(n), BidderProfile::iid(expo, n), 1.0});
  for (double eps : {0.5, 1.0}) {
    const auto f = make_pareto_truncated({eps, 100.0});
    for (std::size_t n : {1, 2}) {
      iid.push_back({"pareto eps=" + format_number(eps) + " n=" + std::to_string(n),
                     BidderProfile::iid(f, n), eps / (1.0 + eps)});
    }
  }
  auto run = [&](const Corpus& c, double factor) {
    const auto ap = ap_rev(c.profile, o.estimator);
    const SellerFirstEvaluator eval(c.profile, o.estimator);
    const auto rev = eval.revenues(ap.price);
    const auto opt = eval.opt_rev();
    const double coef = factor * c_alpha(c.alpha);
    const double se = std::hypot(rev.stderr_seller, coef * opt.stderr);
    rep.at_least("seller revenue at APRev price, " + c.name, coef * opt.value, rev.seller_revenue,
                 4.0 * se);
    rep.rows.push_back({c.name, "seller_first", ap.price, rev});
  };
  for (const auto& c : iid) run(c, 1.0 - 1.0 / kE);
  const BidderProfile mixed({uniform, expo});
  const double alpha = std::min(certified_alpha(uniform), certified_alpha(expo));
  rep.info("certified alpha, uniform + exponential", alpha);
  run({"uniform + exponential", mixed, alpha}, 1.0 / 2.62);
  return rep;
}

inline ClaimReport randomization_no_gain(const ClaimOptions& o) {
  ClaimReport rep;
  rep.oracle = true;
  const std::vector<std::pair<std::string, BidderProfile>> profiles = {
      {"uniform n=1", BidderProfile::iid(make_uniform(0.0, 1.0), 1)},
      {"uniform n=2", BidderProfile::iid(make_uniform(0.0, 1.0), 2)},
      {"exponential n=1", BidderProfile::iid(make_exponential(1.0, 50.0), 1)},
      {"pareto eps=1 H=100 n=1", BidderProfile::iid(make_pareto_truncated({1.0, 100.0}), 1)},
  };
  std::uint64_t seed = o.estimator.seed;
  for (const auto& [name, profile] : profiles) {
    const auto dom = oracle_menu_dominance(profile, 50, ++seed, o.estimator);
    rep.at_most("max menu excess over best posted price, " + name, 0.0, dom.max_violation,
                4.0 * dom.violation_stderr);
    rep.equal("every menu within 4 stderr, " + name, 1.0, dom.within_noise ? 1.0 : 0.0,
              0.0);
    const SellerFirstEvaluator eval(profile, o.estimator);
    const auto sample = VirtualSurplusSample::draw(profile, o.estimator);
    for (double frac : {0.25, 0.5, 0.75}) {
      const double p0 = frac * eval.opt_rev().value * 2.0;
      const auto menu = randomized_menu_revenue(RandomizedMenu({{1.0, p0}}), sample);
      const auto direct = eval.revenues(p0);
      rep.equal("deterministic menu (1, " + format_number(p0) + ") vs posted price, " + name,
                direct.seller_revenue, menu.value,
                4.0 * std::hypot(menu.stderr, direct.stderr_seller));
    }
  }
  return rep;
}

inline ClaimReport intermediary_first_mhr(const ClaimOptions& o) {
  ClaimReport rep;
  const auto expo = make_exponential(1.0, 50.0);
  std::vector<int> ns = {1, 2, 3, 5};
  if (o.n) ns = {*o.n};
  const double factor = (1.0 / kE) * (1.0 - 1.0 / kE);
  for (int n : ns) {
    const auto profile = BidderProfile::iid(expo, static_cast<std::size_t>(n));
    const auto sol = solve_intermediary_first(profile);
    const auto opt = opt_rev(profile, o.estimator);
    const std::string tag = " n=" + std::to_string(n);
    rep.at_least("intermediary-first revenue vs (1/e)(1-1/e) OptRev" + tag, factor * opt.value,
                 sol.revenues.intermediary_revenue, 4.0 * factor * opt.stderr);
    rep.info("first-order seller price agrees" + tag, sol.first_order_agrees ? 1.0 : 0.0);
    if (n == 1) {
      rep.equal("intermediary revenue vs e^-2" + tag, std::exp(-2.0),
                sol.revenues.intermediary_revenue, 1e-3);
      rep.equal("OptRev vs e^-1" + tag, std::exp(-1.0), opt.value, std::max(1e-3, 4.0 * opt.stderr));
    }
    rep.rows.push_back({"exponential" + tag, "intermediary_first", sol.optimal_r, sol.revenues});
  }
  return rep;
}

// Largest drop of the hazard rate between neighbouring grid points.
inline double hazard_max_drop(const ValueDistribution& dist, std::size_t grid_size = 1000) {
  const auto grid = support_grid(dist, grid_size);
  double worst = 0.0;
  double prev = hazard_rate(dist, grid[0]);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (dist.tail(grid[i]) <= 1e-12) break;
    const double h = hazard_rate(dist, grid[i]);
    worst = std::max(worst, prev - h);
    prev = h;
  }
  return worst;
}

inline ClaimReport max_of_mhr(const ClaimOptions& o) {
  ClaimReport rep;
  std::vector<std::pair<std::string, ValueDistribution>> bases = {
      {"exp1", make_exponential(1.0, 50.0)}, {"uniform", make_uniform(0.0, 1.0)}};
  if (o.dist) bases = {{*o.dist, distribution_from_name(*o.dist)}};
  std::vector<int> ns = {2, 3, 5};
  if (o.n) ns = {*o.n};
  for (const auto& [name, base] : bases) {
    for (int n : ns) {
      rep.at_most("hazard drop of max, " + name + " n=" + std::to_string(n), 0.0,
                  hazard_max_drop(max_distribution(base, n)), 1e-8);
    }
  }
  return rep;
}

inline ClaimReport posted_price_equivalence(const ClaimOptions& o) {
  ClaimReport rep;
  rep.oracle = true;
  const auto bidder = make_uniform(0.0, 1.0);
  const auto grid = uniform_grid(0.0, 1.0, 11);
  double worst_slack = -std::numeric_limits<double>::infinity();
  double worst_gap = 0.0;
  double omega_mismatch = 0.0;
  for (std::uint64_t m = 0; m < 20; ++m) {
    const auto mech = make_random_mechanism(o.estimator.seed + m, grid, 1 + m % 3);
    omega_mismatch = std::max(
        omega_mismatch, std::abs(oracle_min_payment(mech) - min_achievable_payment(mech).omega));
    for (double r : {0.0, 0.1, 0.2, 0.3, 0.4}) {
      EstimatorConfig cfg = o.estimator;
      cfg.seed = o.estimator.seed * 1000 + m;
      const auto res = oracle_discrete_game(mech, r, bidder, cfg);
      worst_gap = std::max(worst_gap, res.max_abs_gap);
      worst_slack = std::max(worst_slack, res.max_abs_gap - 4.0 * res.stderr);
    }
  }
  rep.at_most("max over 100 instances of (gap - 4 stderr)", 0.0, worst_slack, 0.0);
  rep.info("max gap", worst_gap);
  rep.equal("omega: enumeration vs oracle", 0.0, omega_mismatch, 1e-12);
  return rep;
}

inline ClaimReport simultaneous_gap(const ClaimOptions& o) {
  ClaimReport rep;
  std::vector<double> eps_list = {0.5, 1.0};
  if (o.epsilon) eps_list = {*o.epsilon};
  const double h = o.h.value_or(100.0);
  for (double eps : eps_list) {
    const auto params = ParetoTruncatedParams::make(eps, h, true);
    const auto num = equilibrium_revenue_gap_numeric(params, o.estimator);
    const auto& eq = num.equilibria;
    const double step = eq.grid_step;
    const double band_lo = h / (1.0 + 1.0 / eps);
    const double band_hi = h / (1.0 + eps);
    double off_line = 0.0;
    double outside_band = 0.0;
    std::size_t uncertified = 0;
    for (const auto& e : eq.points) {
      off_line = std::max(off_line, std::abs(e.p + e.r - h) / step);
      outside_band = std::max({outside_band, (band_lo - e.p) / step, (e.p - band_hi) / step});
      if (!e.certified) ++uncertified;
    }
    rep.info(label("equilibria found", eps), static_cast<double>(eq.points.size()));
    rep.at_most(label("max |p + r - H| in grid steps", eps), 2.0, off_line, 0.0);
    rep.at_most(label("max distance of p outside band in grid steps", eps), 2.0, outside_band, 0.0);
    rep.equal(label("equilibria failing the finer re-check", eps), 0.0,
              static_cast<double>(uncertified), 0.0);
    rep.at_most(label("max equilibrium revenue vs H^-eps", eps), std::pow(h, -eps),
                eq.max_revenue(), 1e-12);
    const auto closed = equilibrium_revenue_gap_fEH(params);
    const double ratio = std::pow(1.0 + 1.0 / eps, 1.0 + eps) / std::pow(h, eps);
    rep.equal(label("closed-form ratio", eps), ratio, closed.ratio, 1e-6);
    const double se = num.seller_first.revenues.stderr_seller;
    rep.at_most(label("numeric ratio vs closed-form ratio", eps), closed.ratio, num.gap.ratio,
                4.0 * se * num.gap.ratio / std::max(num.gap.stackelberg_min_rev, 1e-12));
    rep.info(label("numeric Stackelberg leader revenue", eps), num.gap.stackelberg_min_rev,
             closed.stackelberg_min_rev);
    rep.info(label("no-trade equilibria present", eps), eq.no_trade_equilibria ? 1.0 : 0.0);
  }
  return rep;
}

inline ClaimReport virtual_value_tail_bounds(const ClaimOptions&) {
  ClaimReport rep;
  struct Item {
    std::string name;
    ValueDistribution dist;
    double alpha;
  };
  const auto max_uniform = max_distribution(make_uniform(0.0, 1.0), 3);
  std::vector<Item> corpus = {
      {"uniform", make_uniform(0.0, 1.0), 1.0},
      {"exponential", make_exponential(1.0, 50.0), 1.0},
      {"uniform[2,5]", make_uniform(2.0, 5.0), 1.0},
      {"max of 3 uniform", max_uniform, certified_alpha(max_uniform)},
  };
  for (double eps : {0.5, 1.0, 2.0}) {
    corpus.push_back({"pareto eps=" + format_number(eps), make_pareto_truncated({eps, 100.0}),
                      eps / (1.0 + eps)});
  }
  for (const auto& item : corpus) {
    const double c = c_alpha(item.alpha);
    const double reserve = *inverse_virtual_value(item.dist, 0.0);
    rep.at_least("Pr[v >= phi^-1(0)] vs c(alpha), " + item.name, c, item.dist.survival(reserve),
                 1e-6);
    double worst = std::numeric_limits<double>::infinity();
    const double top = effective_upper(item.dist);
    for (double p : uniform_grid(item.dist.support_lo(), top, 200)) {
      const auto v = inverse_virtual_value(item.dist, p);
      const double lhs = v ? item.dist.survival(*v) : 0.0;
      worst = std::min(worst, lhs - c * item.dist.survival(p));
    }
    rep.at_least("min over p of Pr[v >= phi^-1(p)] - c(alpha) Pr[v >= p], " + item.name, 0.0,
                 worst, 1e-6);
  }
  const auto expo = make_exponential(1.0, 50.0);
  rep.equal("exponential: Pr[v >= phi^-1(0)] vs 1/e", c_alpha(1.0),
            expo.survival(*inverse_virtual_value(expo, 0.0)), 1e-9);
  return rep;
}

inline ClaimReport determinism(const ClaimOptions& o) {
  ClaimReport rep;
  for (Backend backend : {Backend::kAutomatic, Backend::kMonteCarlo}) {
    ClaimOptions opts = o;
    opts.estimator.backend = backend;
    const auto first = revenue_csv(seller_first_separation(opts).rows);
    const auto second = revenue_csv(seller_first_separation(opts).rows);
    rep.equal("identical CSV bytes, backend " + std::string(to_string(backend)), 1.0,
              first == second ? 1.0 : 0.0, 0.0);
  }
  return rep;
}

}  // namespace claims

inline const std::vector<ClaimSpec>& claim_registry() {
  static const std::vector<ClaimSpec> registry = {
      {"seller-first-separation",
       "F_{eps,H}, seller moves first: seller revenue (1+1/eps)^-(1+eps), OptRev 1",
       claims::seller_first_separation},
      {"second-mover-revenue",
       "F_{eps,H}, seller moves first: intermediary revenue (1/eps)(1+1/eps)^-(1+eps)",
       claims::second_mover_revenue},
      {"intermediary-br-oracle",
       "grid-search intermediary best response matches min(p/eps, H-p) on p in [1, H]",
       claims::intermediary_br_oracle},
      {"strong-regularity-tightness",
       "witness F_{eps,H} with eps = alpha/(1-alpha): seller revenue equals c(alpha) OptRev",
       claims::strong_regularity_tightness},
      {"posted-price-guarantee",
       "seller revenue at the APRev price >= (1-1/e) c(alpha) OptRev (1/2.62 non-identical)",
       claims::posted_price_guarantee},
      {"randomization-no-gain", "randomized menus never beat the best posted price",
       claims::randomization_no_gain},
      {"intermediary-first-mhr",
       "exponential bidders, intermediary moves first: revenue >= (1/e)(1-1/e) OptRev",
       claims::intermediary_first_mhr},
      {"max-of-mhr", "maximum of i.i.d. MHR values has a nondecreasing hazard rate",
       claims::max_of_mhr},
      {"posted-price-equivalence",
       "random discrete mechanisms play like a posted price at the minimum achievable payment",
       claims::posted_price_equivalence},
      {"simultaneous-gap",
       "simultaneous play on F_{eps,H}: equilibria on p + r = H, revenue <= H^-eps",
       claims::simultaneous_gap},
      {"virtual-value-tail-bounds",
       "Pr[v >= phi^-1(p)] >= c(alpha) Pr[v >= p]; tight for the exponential at p = 0",
       claims::virtual_value_tail_bounds},
      {"determinism", "repeating the separation sweep yields identical CSV bytes",
       claims::determinism},
  };
  return registry;
}

inline const ClaimSpec* find_claim(std::string_view id) {
  for (const auto& c : claim_registry()) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

inline ClaimReport run_claim(const ClaimSpec& spec, const ClaimOptions& opts) {
  auto rep = spec.run(opts);
  rep.claim_id = spec.id;
  rep.description = spec.description;
  return rep;
}

inline Json claim_report_to_json(const ClaimReport& rep) {
  Json j;
  j["claim_id"] = rep.claim_id;
  j["description"] = rep.description;
  j["pass"] = rep.pass();
  j["oracle"] = rep.oracle;
  j["checks"] = Json::array();
  for (const auto& c : rep.checks) {
    Json cj;
    cj["label"] = c.label;
    cj["kind"] = to_string(c.kind);
    cj["expected"] = json_number(c.expected);
    cj["observed"] = json_number(c.observed);
    cj["tolerance"] = json_number(c.tolerance);
    cj["pass"] = c.pass;
    j["checks"].push_back(std::move(cj));
  }
  return j;
}

}  // namespace intermed

#endif  // INTERMED_CLAIMS_HPP_
