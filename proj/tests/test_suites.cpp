// Copyright 2026 The ckforms Authors
// SPDX-License-Identifier: Apache-2.0

#include <regex>
#include <string>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "ckforms/suites.hpp"

using namespace ckforms;

namespace {

std::string strip_wall_time(std::string s) {
  static const std::regex line("\\s*\"wall_time_s\":[^\\n]*\\n");
  return std::regex_replace(s, line, "\n");
}

}  // namespace

TEST_CASE("suite dispatch validates names and parameters") {
  SuiteConfig cfg;
  CHECK_THROWS_AS(run_suites("bogus", cfg), std::invalid_argument);
  cfg.samples = 0;
  CHECK_THROWS_AS(run_algebra_suite(cfg), std::invalid_argument);
  cfg.samples = 5;
  cfg.m = 4;
  CHECK_THROWS_AS(run_commutator_suite(cfg), std::invalid_argument);
  CHECK_THROWS_AS(run_curvature_suite(cfg), std::invalid_argument);
  CHECK_THROWS_AS(run_cpn_suite(cfg), std::invalid_argument);
  CHECK_THROWS_AS(run_conformal_suite(cfg), std::invalid_argument);
  cfg.m = 2;
  cfg.degree = 3;
  CHECK_THROWS_AS(run_cpn_suite(cfg), std::invalid_argument);
  cfg.degree = 6;
  CHECK_THROWS_AS(run_cpn_suite(cfg), std::invalid_argument);
  cfg.m = 1;
  cfg.degree = 2;
  CHECK_THROWS_AS(run_conformal_suite(cfg), std::invalid_argument);
  cfg.m = 0;
  CHECK_THROWS_AS(run_commutator_suite(cfg), std::invalid_argument);
}

TEST_CASE("serialization golden records") {
  SuiteReport r;
  r.suite = "demo";
  r.checks.push_back(make_check("alpha", "anchor.a", 1.23456789e-5, 1e-4));
  r.checks.push_back(skip_check("beta", "anchor.b"));
  r.wall_time_s = 0.5;

  const std::string js = reports_to_json({r});
  const nlohmann::json parsed = nlohmann::json::parse(js);
  CHECK(parsed["schema"] == 1);
  CHECK(parsed["all_pass"] == true);
  REQUIRE(parsed["suites"].size() == 1);
  const auto& s = parsed["suites"][0];
  CHECK(s["suite"] == "demo");
  CHECK(s["config"]["m"] == 2);
  CHECK(s["config"]["samples"] == 50);
  CHECK(s["config"]["seed"] == 20260815);
  REQUIRE(s["checks"].size() == 2);
  CHECK(s["checks"][0]["name"] == "alpha");
  CHECK(s["checks"][0]["anchor"] == "anchor.a");
  CHECK(s["checks"][0]["pass"] == true);
  CHECK(s["checks"][0]["skipped"] == false);
  CHECK(s["checks"][1]["skipped"] == true);
  // Residuals are rounded to six significant digits before serialization.
  CHECK(js.find("\"max_residual\": 1.23457e-05") != std::string::npos);

  const std::string expected_csv =
      "suite,check,anchor,max_residual,tolerance,pass,skipped\n"
      "demo,alpha,anchor.a,1.23457e-05,1.00000e-04,true,false\n"
      "demo,beta,anchor.b,0.00000e+00,0.00000e+00,true,true\n";
  CHECK(reports_to_csv({r}) == expected_csv);
}

TEST_CASE("failing checks flip the top-level verdict") {
  SuiteReport r;
  r.suite = "demo";
  r.checks.push_back(make_check("alpha", "anchor.a", 2.0, 1e-4));
  CHECK(r.passed() == false);
  const nlohmann::json parsed = nlohmann::json::parse(reports_to_json({r}));
  CHECK(parsed["all_pass"] == false);
  CHECK(parsed["suites"][0]["checks"][0]["pass"] == false);
}

TEST_CASE("algebra suite passes and reruns byte-identically") {
  SuiteConfig cfg;
  cfg.samples = 42;
  const SuiteReport a = run_algebra_suite(cfg);
  CHECK(a.passed());
  CHECK(a.suite == "algebra");
  CHECK(a.checks.size() >= 8);
  const SuiteReport b = run_algebra_suite(cfg);
  CHECK(strip_wall_time(reports_to_json({a})) == strip_wall_time(reports_to_json({b})));
}

TEST_CASE("dispatch by name returns the named suite") {
  SuiteConfig cfg;
  cfg.samples = 10;
  const auto reports = run_suites("middim", cfg);
  REQUIRE(reports.size() == 1);
  CHECK(reports[0].suite == "middim");
  CHECK(reports[0].passed());
}
