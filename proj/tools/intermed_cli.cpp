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

// intermed_cli: analyze distributions, solve scenarios, reproduce claims.
//
// Exit codes: 0 success (every claim passed), 1 a claim failed or a solver
// raised an error, 2 the command line or an input file could not be parsed.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "intermed/intermed.hpp"

namespace {

using namespace intermed;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitParse = 2;

struct CommonFlags {
  std::optional<std::string> scenario;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::optional<std::string> out;
  std::string format = "csv";
};

void apply_overrides(const CommonFlags& flags, EstimatorConfig& cfg) {
  if (flags.seed) cfg.seed = *flags.seed;
  if (flags.samples) cfg.sample_count = *flags.samples;
  cfg.validate();
}

void write_output(const fs::path& dir, const std::string& name, const std::string& content,
                  std::vector<std::string>& artifacts) {
  const auto path = dir / name;
  write_text_file(path, content);
  artifacts.push_back(path.string());
}

// ---------------------------------------------------------------------------
// analyze-dist

std::string distribution_table(const ValueDistribution& dist, std::size_t points) {
  std::string csv = "v,cdf,pdf,virtual_value,hazard\n";
  for (double v : support_grid(dist, points)) {
    double hazard = std::numeric_limits<double>::quiet_NaN();
    if (dist.tail(v) > 1e-12) hazard = hazard_rate(dist, v);
    csv += format_number(v) + ',' + format_number(dist.cdf(v)) + ',' + format_number(dist.pdf(v)) +
           ',' + format_number(detail::virtual_value_extended(dist, v)) + ',' +
           format_number(hazard) + '\n';
  }
  return csv;
}

Json analyze(const ValueDistribution& dist) {
  const auto report = check_alpha_strong_regularity(dist, 0.0);
  Json j;
  j["distribution"] = dist.describe();
  j["support_lo"] = json_number(dist.support_lo());
  j["support_hi"] = json_number(dist.support_hi());
  j["atom_hi"] = json_number(dist.atom_hi());
  j["alpha_estimate"] = json_number(certified_alpha(dist));
  j["alpha_lower"] = json_number(report.alpha_lower);
  j["is_regular"] = report.is_regular;
  j["is_mhr"] = report.is_mhr;
  j["grid_size"] = report.grid_size;
  return j;
}

int cmd_analyze_dist(const CommonFlags& flags, const std::optional<std::string>& dist_name,
                     const std::optional<double>& eps, const std::optional<double>& h) {
  std::vector<std::pair<std::string, ValueDistribution>> dists;
  std::string id = "distribution";
  std::string default_dir = "intermed_out";
  if (flags.scenario) {
    const auto sc = load_scenario(*flags.scenario);
    id = sc.scenario_id;
    default_dir = sc.output_dir;
    for (std::size_t i = 0; i < sc.profile.size(); ++i) {
      bool seen = false;
      for (std::size_t k = 0; k < i; ++k) seen = seen || sc.profile[k].same_model(sc.profile[i]);
      if (!seen) dists.emplace_back("bidder" + std::to_string(i), sc.profile[i]);
    }
  } else if (dist_name) {
    id = *dist_name;
    dists.emplace_back(*dist_name, distribution_from_name(*dist_name));
  } else if (eps && h) {
    id = "pareto_eps" + format_number(*eps) + "_H" + format_number(*h);
    dists.emplace_back(id, make_pareto_truncated(ParetoTruncatedParams::make(*eps, *h)));
  } else {
    throw Error(ErrorKind::kParseError, "analyze-dist needs --scenario, --dist or --eps/--H");
  }
  const fs::path dir = resolve_output_dir(flags.out, default_dir);
  std::vector<std::string> artifacts;
  Json all = Json::array();
  for (const auto& [name, dist] : dists) {
    Json j = analyze(dist);
    j["name"] = name;
    const std::string stem = name == id ? id : id + "_" + name;
    write_output(dir, stem + "_table.csv", distribution_table(dist, 1000), artifacts);
    if (flags.format == "json") {
      all.push_back(j);
      continue;
    }
    std::cout << name << ": " << dist.describe() << "\n"
              << "  support [" << format_number(dist.support_lo()) << ", "
              << format_number(dist.support_hi()) << "], atom at upper end "
              << format_number(dist.atom_hi()) << "\n"
              << "  alpha ~ " << format_number(j["alpha_estimate"].get<double>())
              << "  regular " << (j["is_regular"].get<bool>() ? "yes" : "no") << "  mhr "
              << (j["is_mhr"].get<bool>() ? "yes" : "no") << "\n"
              << "  v, virtual value, hazard\n";
    for (double v : support_grid(dist, 11)) {
      std::cout << "    " << format_number(v) << ", "
                << format_number(detail::virtual_value_extended(dist, v)) << ", ";
      std::cout << (dist.tail(v) > 1e-12 ? format_number(hazard_rate(dist, v)) : "saturated")
                << "\n";
    }
  }
  if (flags.format == "json") std::cout << all.dump(2) << "\n";
  for (const auto& a : artifacts) std::cerr << "wrote " << a << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// solve

int cmd_solve(const CommonFlags& flags) {
  if (!flags.scenario) throw Error(ErrorKind::kParseError, "solve needs --scenario");
  auto sc = load_scenario(*flags.scenario);
  apply_overrides(flags, sc.estimator);
  const fs::path dir = resolve_output_dir(flags.out, sc.output_dir);
  const std::string model(to_string(sc.model));

  Json report;
  report["scenario_id"] = sc.scenario_id;
  report["model"] = model;
  Json inputs;
  inputs["bidders"] = Json::array();
  for (const auto& d : sc.profile.distributions()) inputs["bidders"].push_back(d.describe());
  inputs["sample_count"] = sc.estimator.sample_count;
  inputs["seed"] = sc.estimator.seed;
  inputs["shards"] = sc.estimator.shards;
  inputs["quadrature_points"] = sc.estimator.quadrature_points;
  inputs["backend"] = to_string(sc.estimator.backend);
  inputs["grid_points"] = sc.solver.grid_points;
  inputs["tolerance"] = json_number(sc.solver.tolerance);
  report["inputs"] = inputs;

  std::vector<RevenueRow> rows;
  std::vector<std::string> artifacts;
  try {
    switch (sc.model) {
      case GameModel::kSellerFirst: {
        SellerFirstOptions opts;
        opts.grid_points = sc.solver.grid_points;
        opts.restrict_to_support = sc.solver.restrict_to_support;
        const auto sol = solve_seller_first(sc.profile, sc.estimator, opts);
        rows.push_back({sc.scenario_id, model, sol.optimal_p0, sol.revenues});
        Json s;
        s["optimal_p0"] = json_number(sol.optimal_p0);
        s["revenues"] = revenues_to_json(sol.revenues);
        s["search_range"] = Json::array({json_number(sol.search_lo), json_number(sol.search_hi)});
        Json reserves = Json::array();
        for (const auto& r : sol.intermediary_mechanism.reserves) {
          reserves.push_back(r ? json_number(*r) : Json(nullptr));
        }
        s["intermediary_reserves"] = reserves;
        report["solution"] = s;
        report["search_trace"] = evaluations_to_json(sol.search.grid_evaluations);
        report["optimizer_path"] = evaluations_to_json(sol.search.refinement_path);
        report["verification"]["perturbation_stable"] = sol.perturbation_stable;
        write_output(dir, sc.scenario_id + "_seller_revenue_curve.csv",
                     curve_csv("p0", "seller_revenue", sol.search.grid_evaluations), artifacts);
        break;
      }
      case GameModel::kIntermediaryFirst: {
        IntermediaryFirstOptions opts;
        opts.grid_points = sc.solver.grid_points;
        const auto sol = solve_intermediary_first(sc.profile, opts);
        rows.push_back({sc.scenario_id, model, sol.optimal_r, sol.revenues});
        Json s;
        s["optimal_r"] = json_number(sol.optimal_r);
        s["seller_br_price"] = json_number(sol.seller_br_price);
        s["revenues"] = revenues_to_json(sol.revenues);
        report["solution"] = s;
        report["search_trace"] = evaluations_to_json(sol.search.grid_evaluations);
        report["optimizer_path"] = evaluations_to_json(sol.search.refinement_path);
        report["verification"]["first_order_price"] =
            sol.first_order_price ? json_number(*sol.first_order_price) : Json(nullptr);
        report["verification"]["first_order_agrees"] = sol.first_order_agrees;
        write_output(dir, sc.scenario_id + "_intermediary_revenue_curve.csv",
                     curve_csv("r", "intermediary_revenue", sol.search.grid_evaluations),
                     artifacts);
        break;
      }
      case GameModel::kSimultaneous: {
        const auto eq = solve_simultaneous_single_bidder(sc.profile[0], sc.solver.grid_points,
                                                         sc.solver.tolerance);
        std::string csv = "p,r,seller_revenue,intermediary_revenue,certified\n";
        Json points = Json::array();
        bool all_certified = true;
        for (const auto& e : eq.points) {
          csv += format_number(e.p) + ',' + format_number(e.r) + ',' +
                 format_number(e.seller_revenue) + ',' + format_number(e.intermediary_revenue) +
                 ',' + (e.certified ? "1" : "0") + '\n';
          points.push_back(Json::array({json_number(e.p), json_number(e.r)}));
          all_certified = all_certified && e.certified;
          GameRevenues g;
          g.seller_revenue = e.seller_revenue;
          g.intermediary_revenue = e.intermediary_revenue;
          g.sale_probability = sc.profile[0].survival(e.p + e.r);
          rows.push_back({sc.scenario_id, model, e.p, g});
        }
        write_output(dir, sc.scenario_id + "_equilibria.csv", csv, artifacts);
        Json s;
        s["points"] = points;
        s["grid_step"] = json_number(eq.grid_step);
        s["tolerance"] = json_number(eq.tolerance);
        s["max_revenue"] = json_number(eq.max_revenue());
        s["no_trade_equilibria"] = eq.no_trade_equilibria;
        if (eq.band) {
          s["band"] = Json::array({json_number(eq.band->first), json_number(eq.band->second)});
          write_output(dir, sc.scenario_id + "_band.csv",
                       "lo,hi\n" + format_number(eq.band->first) + ',' +
                           format_number(eq.band->second) + '\n',
                       artifacts);
        }
        report["solution"] = s;
        report["verification"]["all_points_certified"] = all_certified;
        break;
      }
    }
  } catch (const Error& e) {
    throw Error(e.kind(), "scenario " + sc.scenario_id + ": " + e.what());
  }

  const std::string csv = revenue_csv(rows);
  write_output(dir, sc.scenario_id + "_revenues.csv", csv, artifacts);
  report["artifacts"] = artifacts;
  const auto report_path = dir / (sc.scenario_id + "_report.json");
  write_text_file(report_path, report.dump(2) + "\n");
  std::cout << (flags.format == "json" ? report.dump(2) + "\n" : csv);
  std::cerr << "wrote " << report_path.string() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// reproduce / list-claims

int cmd_list_claims() {
  for (const auto& c : claim_registry()) std::cout << c.id << "\t" << c.description << "\n";
  std::cout << "all\trun every claim above\n";
  return kExitOk;
}

int cmd_reproduce(const CommonFlags& flags, const std::string& claim_id, ClaimOptions opts) {
  apply_overrides(flags, opts.estimator);
  std::vector<const ClaimSpec*> selected;
  if (claim_id == "all") {
    for (const auto& c : claim_registry()) selected.push_back(&c);
  } else if (const auto* c = find_claim(claim_id)) {
    selected.push_back(c);
  } else {
    std::cerr << "unknown claim \"" << claim_id << "\"; available claims:\n";
    for (const auto& c : claim_registry()) std::cerr << "  " << c.id << "\n";
    std::cerr << "  all\n";
    return kExitParse;
  }
  const fs::path dir = resolve_output_dir(flags.out, "intermed_out");
  bool all_pass = true;
  Json reports = Json::array();
  for (const auto* spec : selected) {
    const auto rep = run_claim(*spec, opts);
    all_pass = all_pass && rep.pass();
    reports.push_back(claim_report_to_json(rep));
    write_text_file(dir / ("claim_" + spec->id + ".json"), claim_report_to_json(rep).dump(2) + "\n");
    if (!rep.rows.empty()) write_text_file(dir / ("claim_" + spec->id + "_revenues.csv"), revenue_csv(rep.rows));
    if (flags.format == "json") continue;
    std::cout << (rep.pass() ? "PASS " : "FAIL ") << rep.claim_id << "\n";
    for (const auto& c : rep.checks) {
      const char* tag = c.kind == CheckKind::kInfo ? "info" : (c.pass ? "ok  " : "FAIL");
      std::cout << "  [" << tag << "] " << c.label << ": observed " << format_number(c.observed);
      if (c.kind != CheckKind::kInfo) {
        std::cout << ", " << to_string(c.kind) << " " << format_number(c.expected) << " (tol "
                  << format_number(c.tolerance) << ")";
      } else if (c.expected != 0.0) {
        std::cout << " (reference " << format_number(c.expected) << ")";
      }
      std::cout << "\n";
    }
  }
  if (flags.format == "json") std::cout << reports.dump(2) << "\n";
  return all_pass ? kExitOk : kExitFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Seller, intermediary and buyers: revenue solvers and claim reproduction"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::optional<std::string> dist_name;
  std::optional<double> eps;
  std::optional<double> h;
  std::optional<int> n;
  std::string claim_id;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", flags.seed, "Random seed (u64)");
    cmd->add_option("--samples", flags.samples, "Monte Carlo sample count")->check(CLI::PositiveNumber);
    cmd->add_option("--out", flags.out, "Output directory (default: $INTERMED_OUT_DIR or scenario)");
    cmd->add_option("--format", flags.format, "Standard output format")
        ->check(CLI::IsMember({"csv", "json"}));
  };

  auto* analyze_cmd = app.add_subcommand("analyze-dist", "Regularity, virtual values and hazard rates");
  analyze_cmd->add_option("--scenario", flags.scenario, "Scenario file");
  analyze_cmd->add_option("--dist", dist_name, "Named distribution: uniform, exp1, pareto:<eps>:<H>");
  analyze_cmd->add_option("--eps", eps, "Pareto epsilon");
  analyze_cmd->add_option("--H", h, "Pareto upper end H");
  add_common(analyze_cmd);

  auto* solve_cmd = app.add_subcommand("solve", "Solve the game described by a scenario");
  solve_cmd->add_option("--scenario", flags.scenario, "Scenario file")->required();
  add_common(solve_cmd);

  auto* reproduce_cmd = app.add_subcommand("reproduce", "Run a registered claim (or all)");
  reproduce_cmd->add_option("claim", claim_id, "Claim id, or all")->required();
  reproduce_cmd->add_option("--eps", eps, "Epsilon for the F_{eps,H} claims");
  reproduce_cmd->add_option("--H", h, "H for the F_{eps,H} claims");
  reproduce_cmd->add_option("--dist", dist_name, "Named base distribution");
  reproduce_cmd->add_option("--n", n, "Number of bidders")->check(CLI::Range(1, 64));
  add_common(reproduce_cmd);

  auto* list_cmd = app.add_subcommand("list-claims", "List registered claims");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }

  try {
    if (analyze_cmd->parsed()) return cmd_analyze_dist(flags, dist_name, eps, h);
    if (solve_cmd->parsed()) return cmd_solve(flags);
    if (list_cmd->parsed()) return cmd_list_claims();
    if (reproduce_cmd->parsed()) {
      ClaimOptions opts;
      opts.epsilon = eps;
      opts.h = h;
      opts.dist = dist_name;
      opts.n = n;
      return cmd_reproduce(flags, claim_id, opts);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::kParseError ? kExitParse : kExitFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailed;
  }
  return kExitFailed;
}
