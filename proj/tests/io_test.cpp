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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "intermed/io.hpp"

namespace intermed {
namespace {

constexpr const char* kScenario = R"({
  "schema": "intermed.scenario",
  "version": 1,
  "scenario_id": "two_uniform",
  "model": "intermediary_first",
  "bidders": [
    {"family": "uniform", "lo": 0, "hi": 1, "count": 2},
    {"family": "pareto_truncated", "epsilon": 0.5, "H": 20}
  ],
  "estimator": {"sample_count": 1000, "seed": 17, "backend": "monte_carlo"},
  "solver": {"grid_points": 64},
  "output_dir": "somewhere"
})";

std::string parse_error(const std::string& text) {
  try {
    parse_scenario(text, "s.json");
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kParseError);
    return e.what();
  }
  ADD_FAILURE() << "expected a parse error";
  return {};
}

TEST(Scenario, ParsesAllSections) {
  const auto sc = parse_scenario(kScenario);
  EXPECT_EQ(sc.scenario_id, "two_uniform");
  EXPECT_EQ(sc.model, GameModel::kIntermediaryFirst);
  ASSERT_EQ(sc.profile.size(), 3u);
  EXPECT_EQ(sc.profile[0].family(), "uniform");
  EXPECT_EQ(sc.profile[2].family(), "pareto_truncated");
  EXPECT_EQ(sc.estimator.sample_count, 1000u);
  EXPECT_EQ(sc.estimator.seed, 17u);
  EXPECT_EQ(sc.estimator.backend, Backend::kMonteCarlo);
  EXPECT_EQ(sc.solver.grid_points, 64u);
  EXPECT_EQ(sc.output_dir, "somewhere");
}

TEST(Scenario, SyntaxErrorReportsLineAndColumn) {
  const auto msg = parse_error("{\n  \"schema\": \"intermed.scenario\",\n  \"version\": 1,\n  oops\n}");
  EXPECT_NE(msg.find("s.json:4:"), std::string::npos) << msg;
}

TEST(Scenario, SemanticErrorReportsPathAndLine) {
  std::string text = kScenario;
  text.replace(text.find("\"hi\": 1"), 7, "\"hi\": \"x\"");
  const auto msg = parse_error(text);
  EXPECT_NE(msg.find("/bidders/0/hi"), std::string::npos) << msg;
  EXPECT_NE(msg.find("s.json:7"), std::string::npos) << msg;
}

TEST(Scenario, HeaderChecks) {
  std::string wrong_schema = kScenario;
  wrong_schema.replace(wrong_schema.find("intermed.scenario"), 17, "something.else");
  EXPECT_NE(parse_error(wrong_schema).find("schema"), std::string::npos);
  std::string wrong_version = kScenario;
  wrong_version.replace(wrong_version.find("\"version\": 1"), 12, "\"version\": 7");
  EXPECT_NE(parse_error(wrong_version).find("version"), std::string::npos);
}

TEST(Scenario, SimultaneousNeedsOneBidder) {
  std::string text = kScenario;
  text.replace(text.find("intermediary_first"), 18, "simultaneous");
  EXPECT_NE(parse_error(text).find("single bidder"), std::string::npos);
}

TEST(Scenario, RejectsUnknownValues) {
  std::string family = kScenario;
  family.replace(family.find("\"uniform\""), 9, "\"cauchy\"");
  EXPECT_NE(parse_error(family).find("unknown family"), std::string::npos);
  std::string backend = kScenario;
  backend.replace(backend.find("monte_carlo"), 11, "abacus");
  EXPECT_NE(parse_error(backend).find("backend"), std::string::npos);
  std::string model = kScenario;
  model.replace(model.find("intermediary_first"), 18, "auction");
  EXPECT_NE(parse_error(model).find("unknown model"), std::string::npos);
  std::string bad_dist = kScenario;
  bad_dist.replace(bad_dist.find("\"epsilon\": 0.5"), 14, "\"epsilon\": -1");
  EXPECT_NE(parse_error(bad_dist).find("/bidders/1"), std::string::npos);
}

TEST(Distribution, FromJsonAndName) {
  const auto d = parse_distribution(R"({"family": "table", "points": [[0, 0], [1, 0.5], [2, 1]]})");
  EXPECT_NEAR(d.cdf(1.5), 0.75, 1e-15);
  EXPECT_EQ(distribution_from_name("exp1").family(), "exponential");
  EXPECT_DOUBLE_EQ(*distribution_from_name("exp2").param("rate"), 2.0);
  EXPECT_DOUBLE_EQ(*distribution_from_name("pareto:0.5:8").param("H"), 8.0);
  EXPECT_THROW(distribution_from_name("cauchy"), Error);
  const auto sep = R"({"family": "pareto_truncated", "epsilon": 1, "H": 3, "separation": true})";
  EXPECT_THROW(parse_distribution(sep), Error);
}

TEST(Mechanism, JsonRoundTrip) {
  const auto mech = make_second_price_mechanism(uniform_grid(0.0, 1.0, 4), 2, 0.3);
  const auto text = mechanism_to_json(mech).dump();
  const auto back = parse_mechanism(text);
  EXPECT_EQ(back.slots(), 2u);
  EXPECT_EQ(back.profile_count(), mech.profile_count());
  EXPECT_NEAR(min_achievable_payment(back).omega, min_achievable_payment(mech).omega, 1e-12);
}

TEST(Mechanism, StructuralViolationIsReported) {
  const char* text = R"({"schema": "intermed.mechanism", "version": 1, "bid_grid": [0, 1],
    "slots": 1, "winners": [0, 0], "payments": [[0], [1]]})";
  try {
    parse_mechanism(text, "m.json");
    FAIL() << "expected InvalidMechanism";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("zero-bids-no-allocation"), std::string::npos) << e.what();
  }
}

TEST(Output, NumberFormatting) {
  EXPECT_EQ(format_number(0.1 + 0.2), "0.3");
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(1e-20), "1e-20");
  EXPECT_EQ(format_number(std::nan("")), "nan");
  EXPECT_TRUE(json_number(std::numeric_limits<double>::infinity()).is_null());
}

TEST(Output, RevenueCsvColumns) {
  GameRevenues g;
  g.seller_revenue = 0.25;
  g.intermediary_revenue = 0.125;
  g.sale_probability = 0.5;
  g.method = Method::kQuadrature;
  const auto csv = revenue_csv({{"s", "seller_first", 1.0, g}});
  std::istringstream in(csv);
  std::string header;
  std::string row;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_EQ(header, kRevenueCsvHeader);
  EXPECT_EQ(row, "s,seller_first,1,0.25,0.125,0.5,0,0,quadrature");
}

TEST(Output, CurveCsvIsSortedByX) {
  const auto csv = curve_csv("p", "rev", {{2.0, 0.1}, {1.0, 0.3}});
  EXPECT_EQ(csv, "p,rev\n1,0.3\n2,0.1\n");
}

TEST(Output, DirectoryPrecedence) {
  ::unsetenv(kOutDirEnv);
  EXPECT_EQ(resolve_output_dir(std::nullopt, "fallback"), "fallback");
  ::setenv(kOutDirEnv, "from_env", 1);
  EXPECT_EQ(resolve_output_dir(std::nullopt, "fallback"), "from_env");
  EXPECT_EQ(resolve_output_dir(std::string("flag"), "fallback"), "flag");
  ::unsetenv(kOutDirEnv);
}

TEST(Output, WriteCreatesDirectories) {
  const auto dir = std::filesystem::temp_directory_path() / "intermed_io_test" / "nested";
  std::filesystem::remove_all(dir.parent_path());
  write_text_file(dir / "a.csv", "x\n");
  std::ifstream in(dir / "a.csv");
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "x");
  std::filesystem::remove_all(dir.parent_path());
}

}  // namespace
}  // namespace intermed
