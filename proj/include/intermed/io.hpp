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

// Scenario and mechanism files (JSON with a schema/version header) and the
// CSV/JSON report writers. Every number written out goes through
// format_number, so reruns produce byte-identical files.

#ifndef INTERMED_IO_HPP_
#define INTERMED_IO_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

#include <json.hpp>

#include "intermed/distribution.hpp"
#include "intermed/errors.hpp"
#include "intermed/mechanisms.hpp"
#include "intermed/revenue.hpp"

namespace intermed {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kScenarioSchema = "intermed.scenario";
inline constexpr std::string_view kMechanismSchema = "intermed.mechanism";
inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kOutDirEnv = "INTERMED_OUT_DIR";

// ---------------------------------------------------------------------------
// Number formatting

inline std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x == 0.0 ? 0.0 : x);
  return buf;
}

// x rounded to 12 significant digits, for JSON output. Non-finite values
// become null.
inline Json json_number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return std::strtod(format_number(x).c_str(), nullptr);
}

// ---------------------------------------------------------------------------
// Parsing helpers

namespace detail {

struct SourceText {
  std::string name;
  std::string text;

  // 1-based line of the first `"key"` occurrence, when the key is unique.
  std::optional<std::size_t> line_of_key(std::string_view key) const {
    const std::string quoted = "\"" + std::string(key) + "\"";
    const auto first = text.find(quoted);
    if (first == std::string::npos || text.find(quoted, first + 1) != std::string::npos) {
      return std::nullopt;
    }
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + first, '\n'));
  }

  [[noreturn]] void fail(const std::string& path, std::string_view key,
                         const std::string& message) const {
    std::string where = name;
    if (const auto line = line_of_key(key)) where += ":" + std::to_string(*line);
    throw Error(ErrorKind::kParseError, where + ": " + path + ": " + message);
  }
};

inline Json parse_json(const SourceText& src) {
  try {
    return Json::parse(src.text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < src.text.size(); ++i) {
      if (src.text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(ErrorKind::kParseError, src.name + ":" + std::to_string(line) + ":" +
                                            std::to_string(col) + ": malformed JSON");
  }
}

inline const Json& require(const SourceText& src, const Json& obj, const std::string& path,
                           std::string_view key) {
  if (!obj.is_object() || !obj.contains(key)) {
    src.fail(path, key, "missing key \"" + std::string(key) + "\"");
  }
  return obj.at(std::string(key));
}

inline double number_at(const SourceText& src, const Json& obj, const std::string& path,
                        std::string_view key) {
  const auto& v = require(src, obj, path, key);
  if (!v.is_number()) src.fail(path + "/" + std::string(key), key, "expected a number");
  return v.get<double>();
}

inline std::optional<double> optional_number(const SourceText& src, const Json& obj,
                                             const std::string& path, std::string_view key) {
  if (!obj.contains(key)) return std::nullopt;
  return number_at(src, obj, path, key);
}

inline std::string string_at(const SourceText& src, const Json& obj, const std::string& path,
                             std::string_view key) {
  const auto& v = require(src, obj, path, key);
  if (!v.is_string()) src.fail(path + "/" + std::string(key), key, "expected a string");
  return v.get<std::string>();
}

inline void check_header(const SourceText& src, const Json& doc, std::string_view schema) {
  if (!doc.is_object()) src.fail("", "", "top level must be an object");
  if (string_at(src, doc, "", "schema") != schema) {
    src.fail("/schema", "schema", "expected schema \"" + std::string(schema) + "\"");
  }
  const double version = number_at(src, doc, "", "version");
  if (version != kSchemaVersion) {
    src.fail("/version", "version", "unsupported version " + format_number(version));
  }
}

template <typename F>
auto rethrow_as_parse_error(const SourceText& src, const std::string& path, std::string_view key,
                            F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kParseError) throw;
    src.fail(path, key, e.what());
  }
}

inline SourceText read_source(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kParseError, path.string() + ": cannot open file");
  std::ostringstream os;
  os << in.rdbuf();
  return {path.string(), os.str()};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Distributions

inline ValueDistribution distribution_from_json(const Json& spec, const detail::SourceText& src,
                                                const std::string& path) {
  const std::string family = detail::string_at(src, spec, path, "family");
  return detail::rethrow_as_parse_error(src, path, "family", [&]() -> ValueDistribution {
    if (family == "uniform") {
      return make_uniform(detail::number_at(src, spec, path, "lo"),
                          detail::number_at(src, spec, path, "hi"));
    }
    if (family == "exponential") {
      return make_exponential(detail::number_at(src, spec, path, "rate"),
                              detail::optional_number(src, spec, path, "cap"));
    }
    if (family == "pareto_truncated") {
      return make_pareto_truncated(ParetoTruncatedParams::make(
          detail::number_at(src, spec, path, "epsilon"), detail::number_at(src, spec, path, "H"),
          spec.value("separation", false)));
    }
    if (family == "constant") {
      return make_constant_value(detail::number_at(src, spec, path, "value"),
                                 detail::optional_number(src, spec, path, "rel_delta").value_or(1e-4));
    }
    if (family == "table") {
      const auto& pts = detail::require(src, spec, path, "points");
      if (!pts.is_array()) src.fail(path + "/points", "points", "expected an array of [x, F]");
      std::vector<std::pair<double, double>> points;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& pt = pts[i];
        if (!pt.is_array() || pt.size() != 2 || !pt[0].is_number() || !pt[1].is_number()) {
          src.fail(path + "/points/" + std::to_string(i), "points", "expected [x, F]");
        }
        points.emplace_back(pt[0].get<double>(), pt[1].get<double>());
      }
      return make_table(points);
    }
    src.fail(path + "/family", "family", "unknown family \"" + family + "\"");
  });
}

inline ValueDistribution parse_distribution(std::string_view text,
                                            const std::string& name = "<distribution>") {
  const detail::SourceText src{name, std::string(text)};
  return distribution_from_json(detail::parse_json(src), src, "");
}

// Shorthand names used on the command line: uniform, exp1, exp<rate>,
// pareto:<eps>:<H>.
inline ValueDistribution distribution_from_name(const std::string& name) {
  if (name == "uniform") return make_uniform(0.0, 1.0);
  if (name.rfind("exp", 0) == 0) {
    const std::string rate = name.substr(3);
    return make_exponential(rate.empty() ? 1.0 : std::stod(rate), 50.0);
  }
  if (name.rfind("pareto:", 0) == 0) {
    const auto colon = name.find(':', 7);
    if (colon != std::string::npos) {
      return make_pareto_truncated(ParetoTruncatedParams::make(std::stod(name.substr(7, colon - 7)),
                                                               std::stod(name.substr(colon + 1))));
    }
  }
  throw Error(ErrorKind::kParseError, "unknown distribution name \"" + name + "\"");
}

// ---------------------------------------------------------------------------
// Scenarios

enum class GameModel { kSellerFirst, kIntermediaryFirst, kSimultaneous };

inline std::string_view to_string(GameModel m) {
  switch (m) {
    case GameModel::kSellerFirst: return "seller_first";
    case GameModel::kIntermediaryFirst: return "intermediary_first";
    case GameModel::kSimultaneous: return "simultaneous";
  }
  return "unknown";
}

struct SolverSettings {
  std::size_t grid_points = 256;
  double tolerance = 1e-6;
  bool restrict_to_support = false;
};

struct Scenario {
  std::string scenario_id;
  BidderProfile profile;
  GameModel model = GameModel::kSellerFirst;
  EstimatorConfig estimator;
  SolverSettings solver;
  std::string output_dir = "intermed_out";
};

// "bidders" is a list of distribution specs, each with an optional "count".
// Copies made by "count" share one model, so the profile is i.i.d. exactly
// when a single entry is given.
inline BidderProfile profile_from_json(const Json& doc, const detail::SourceText& src) {
  const auto& bidders = detail::require(src, doc, "", "bidders");
  if (!bidders.is_array() || bidders.empty()) {
    src.fail("/bidders", "bidders", "expected a nonempty array");
  }
  std::vector<ValueDistribution> dists;
  for (std::size_t i = 0; i < bidders.size(); ++i) {
    const std::string path = "/bidders/" + std::to_string(i);
    const auto dist = distribution_from_json(bidders[i], src, path);
    const double count = detail::optional_number(src, bidders[i], path, "count").value_or(1.0);
    if (!(count >= 1.0) || count != std::floor(count) || count > 64.0) {
      src.fail(path + "/count", "count", "count must be an integer in [1, 64]");
    }
    dists.insert(dists.end(), static_cast<std::size_t>(count), dist);
  }
  return BidderProfile(std::move(dists));
}

inline Scenario scenario_from_source(const detail::SourceText& src) {
  const Json doc = detail::parse_json(src);
  detail::check_header(src, doc, kScenarioSchema);
  Scenario sc{detail::string_at(src, doc, "", "scenario_id"), profile_from_json(doc, src),
              GameModel::kSellerFirst, EstimatorConfig{}, SolverSettings{}, "intermed_out"};
  if (sc.scenario_id.empty()) src.fail("/scenario_id", "scenario_id", "must be nonempty");

  const std::string model = detail::string_at(src, doc, "", "model");
  if (model == "seller_first") {
    sc.model = GameModel::kSellerFirst;
  } else if (model == "intermediary_first") {
    sc.model = GameModel::kIntermediaryFirst;
  } else if (model == "simultaneous") {
    sc.model = GameModel::kSimultaneous;
    if (sc.profile.size() != 1) {
      src.fail("/model", "model", "simultaneous play is only defined for a single bidder");
    }
  } else {
    src.fail("/model", "model", "unknown model \"" + model + "\"");
  }

  if (doc.contains("estimator")) {
    const auto& est = doc.at("estimator");
    auto integer = [&](std::string_view key, auto& field) {
      if (const auto v = detail::optional_number(src, est, "/estimator", key)) {
        if (*v < 0 || *v != std::floor(*v)) {
          src.fail("/estimator/" + std::string(key), key, "expected a nonnegative integer");
        }
        field = static_cast<std::remove_reference_t<decltype(field)>>(*v);
      }
    };
    integer("sample_count", sc.estimator.sample_count);
    integer("shards", sc.estimator.shards);
    integer("quadrature_points", sc.estimator.quadrature_points);
    if (est.contains("seed")) {
      const auto& seed = est.at("seed");
      if (!seed.is_number_unsigned()) src.fail("/estimator/seed", "seed", "expected a u64");
      sc.estimator.seed = seed.get<std::uint64_t>();
    }
    if (est.contains("backend")) {
      const std::string b = detail::string_at(src, est, "/estimator", "backend");
      if (b == "automatic") {
        sc.estimator.backend = Backend::kAutomatic;
      } else if (b == "monte_carlo") {
        sc.estimator.backend = Backend::kMonteCarlo;
      } else if (b == "quadrature") {
        sc.estimator.backend = Backend::kQuadrature;
      } else {
        src.fail("/estimator/backend", "backend", "unknown backend \"" + b + "\"");
      }
    }
    detail::rethrow_as_parse_error(src, "/estimator", "estimator",
                                   [&] { sc.estimator.validate(); });
  }
  if (doc.contains("solver")) {
    const auto& s = doc.at("solver");
    if (const auto g = detail::optional_number(src, s, "/solver", "grid_points")) {
      if (*g < 3 || *g != std::floor(*g)) src.fail("/solver/grid_points", "grid_points", "must be an integer >= 3");
      sc.solver.grid_points = static_cast<std::size_t>(*g);
    }
    if (const auto t = detail::optional_number(src, s, "/solver", "tolerance")) {
      if (!(*t > 0.0)) src.fail("/solver/tolerance", "tolerance", "must be > 0");
      sc.solver.tolerance = *t;
    }
    sc.solver.restrict_to_support = s.value("restrict_to_support", false);
  }
  if (doc.contains("output_dir")) sc.output_dir = detail::string_at(src, doc, "", "output_dir");
  return sc;
}

inline Scenario parse_scenario(std::string_view text, const std::string& name = "<scenario>") {
  return scenario_from_source({name, std::string(text)});
}

inline Scenario load_scenario(const std::filesystem::path& path) {
  return scenario_from_source(detail::read_source(path));
}

// ---------------------------------------------------------------------------
// Mechanisms

// {"schema": "intermed.mechanism", "version": 1, "bid_grid": [...],
//  "slots": n, "winners": [...], "payments": [[...], ...]}
// Tables are row-major over bid profiles with slot 0 most significant;
// winners use -1 (or null) for "no allocation".
inline DiscreteSellerMechanism mechanism_from_source(const detail::SourceText& src) {
  const Json doc = detail::parse_json(src);
  detail::check_header(src, doc, kMechanismSchema);
  const auto& grid_json = detail::require(src, doc, "", "bid_grid");
  if (!grid_json.is_array()) src.fail("/bid_grid", "bid_grid", "expected an array");
  std::vector<double> grid;
  for (std::size_t i = 0; i < grid_json.size(); ++i) {
    if (!grid_json[i].is_number()) {
      src.fail("/bid_grid/" + std::to_string(i), "bid_grid", "expected a number");
    }
    grid.push_back(grid_json[i].get<double>());
  }
  const double slots = detail::number_at(src, doc, "", "slots");
  if (slots < 1 || slots != std::floor(slots)) src.fail("/slots", "slots", "expected an integer >= 1");

  const auto& win_json = detail::require(src, doc, "", "winners");
  if (!win_json.is_array()) src.fail("/winners", "winners", "expected an array");
  std::vector<int> winners;
  for (std::size_t k = 0; k < win_json.size(); ++k) {
    const auto& w = win_json[k];
    if (w.is_null()) {
      winners.push_back(-1);
    } else if (w.is_number_integer()) {
      winners.push_back(w.get<int>());
    } else {
      src.fail("/winners/" + std::to_string(k), "winners", "expected a slot index or null");
    }
  }
  const auto& pay_json = detail::require(src, doc, "", "payments");
  if (!pay_json.is_array()) src.fail("/payments", "payments", "expected an array");
  std::vector<double> payments;
  for (std::size_t k = 0; k < pay_json.size(); ++k) {
    const auto& row = pay_json[k];
    if (!row.is_array()) src.fail("/payments/" + std::to_string(k), "payments", "expected an array");
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (!row[j].is_number()) {
        src.fail("/payments/" + std::to_string(k) + "/" + std::to_string(j), "payments",
                 "expected a number");
      }
      payments.push_back(row[j].get<double>());
    }
    if (row.size() != static_cast<std::size_t>(slots)) {
      src.fail("/payments/" + std::to_string(k), "payments",
               "row has " + std::to_string(row.size()) + " entries, expected one per slot");
    }
  }
  auto mech = detail::rethrow_as_parse_error(src, "", "winners", [&] {
    return DiscreteSellerMechanism(grid, static_cast<std::size_t>(slots), winners, payments);
  });
  const auto violations = mech.validate();
  if (!violations.empty()) {
    std::string msg = "mechanism violates structural rules:";
    for (const auto& v : violations) {
      msg += " [" + v.rule;
      if (v.profile_index) msg += " at profile " + std::to_string(*v.profile_index);
      msg += ": " + v.message + "]";
    }
    throw Error(ErrorKind::kInvalidMechanism, src.name + ": " + msg);
  }
  return mech;
}

inline DiscreteSellerMechanism parse_mechanism(std::string_view text,
                                               const std::string& name = "<mechanism>") {
  return mechanism_from_source({name, std::string(text)});
}

inline DiscreteSellerMechanism load_mechanism(const std::filesystem::path& path) {
  return mechanism_from_source(detail::read_source(path));
}

inline Json mechanism_to_json(const DiscreteSellerMechanism& mech) {
  Json doc;
  doc["schema"] = kMechanismSchema;
  doc["version"] = kSchemaVersion;
  doc["bid_grid"] = Json::array();
  for (double b : mech.bid_grid()) doc["bid_grid"].push_back(json_number(b));
  doc["slots"] = mech.slots();
  doc["winners"] = Json::array();
  doc["payments"] = Json::array();
  for (std::size_t k = 0; k < mech.profile_count(); ++k) {
    doc["winners"].push_back(mech.winner(k) < 0 ? Json(nullptr) : Json(mech.winner(k)));
    Json row = Json::array();
    for (double p : mech.payments(k)) row.push_back(json_number(p));
    doc["payments"].push_back(std::move(row));
  }
  return doc;
}

// ---------------------------------------------------------------------------
// Writers

struct RevenueRow {
  std::string scenario_id;
  std::string model;
  double p0_or_r = 0.0;
  GameRevenues revenues;
};

inline constexpr std::string_view kRevenueCsvHeader =
    "scenario_id,model,p0_or_r,seller_revenue,intermediary_revenue,sale_probability,"
    "stderr_seller,stderr_intermediary,method";

inline std::string revenue_csv(const std::vector<RevenueRow>& rows) {
  std::string out(kRevenueCsvHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += r.scenario_id + ',' + r.model + ',' + format_number(r.p0_or_r) + ',' +
           format_number(r.revenues.seller_revenue) + ',' +
           format_number(r.revenues.intermediary_revenue) + ',' +
           format_number(r.revenues.sale_probability) + ',' +
           format_number(r.revenues.stderr_seller) + ',' +
           format_number(r.revenues.stderr_intermediary) + ',' +
           std::string(to_string(r.revenues.method)) + '\n';
  }
  return out;
}

inline Json revenues_to_json(const GameRevenues& r) {
  Json j;
  j["seller_revenue"] = json_number(r.seller_revenue);
  j["intermediary_revenue"] = json_number(r.intermediary_revenue);
  j["sale_probability"] = json_number(r.sale_probability);
  j["stderr_seller"] = json_number(r.stderr_seller);
  j["stderr_intermediary"] = json_number(r.stderr_intermediary);
  j["method"] = to_string(r.method);
  return j;
}

inline Json evaluations_to_json(const std::vector<Evaluation>& evals) {
  Json arr = Json::array();
  for (const auto& e : evals) arr.push_back(Json::array({json_number(e.x), json_number(e.value)}));
  return arr;
}

// Two-column CSV of (x, y) pairs, sorted by x.
inline std::string curve_csv(std::string_view x_name, std::string_view y_name,
                             std::vector<Evaluation> points) {
  std::sort(points.begin(), points.end(),
            [](const Evaluation& a, const Evaluation& b) { return a.x < b.x; });
  std::string out = std::string(x_name) + ',' + std::string(y_name) + '\n';
  for (const auto& e : points) out += format_number(e.x) + ',' + format_number(e.value) + '\n';
  return out;
}

inline void write_text_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kDomainError, "cannot write " + path.string());
  out << content;
}

// --out flag, then the environment override, then the scenario's own choice.
inline std::filesystem::path resolve_output_dir(const std::optional<std::string>& flag,
                                                const std::string& fallback) {
  if (flag && !flag->empty()) return *flag;
  if (const char* env = std::getenv(kOutDirEnv); env && *env) return env;
  return fallback;
}

}  // namespace intermed

#endif  // INTERMED_IO_HPP_
