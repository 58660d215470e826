// Copyright 2026 The ckforms Authors
// SPDX-License-Identifier: Apache-2.0
//
// Batch runner for the verification suites. Emits a JSON (or CSV) report to
// stdout or a file; exit code 0 means every check passed, 1 is a numerical
// failure (failing checks listed on stderr), 2 is a usage error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ckforms/suites.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Pointwise verification suites for conformal Killing forms on Kaehler charts"};
  app.require_subcommand(1);
  // Global options (--out, --csv) stay valid after the subcommand name.
  app.fallthrough();

  ckforms::SuiteConfig cfg;
  if (const char* env = std::getenv("TWISTOR_SEED")) {
    char* end = nullptr;
    cfg.seed = std::strtoull(env, &end, 10);
    if (end == env) {
      std::cerr << "usage error: TWISTOR_SEED is not a number\n";
      return 2;
    }
  }

  std::string out_path;
  bool csv = false;
  // The cpn subcommand owns a --h step option, so help stays long-form only.
  app.set_help_flag("--help", "Print help and exit");
  app.add_option("--out", out_path, "Write the report to this file instead of stdout");
  app.add_flag("--csv", csv, "Emit CSV (one row per check) instead of JSON");

  auto subcommand = [&app](const char* name, const char* blurb) {
    CLI::App* sub = app.add_subcommand(name, blurb);
    sub->set_help_flag("--help", "Print help and exit");
    return sub;
  };
  subcommand("algebra", "Exact exterior and Kaehler algebra suites");
  CLI::App* commutators = subcommand("commutators", "Commutator relations on a projective chart");
  commutators->add_option("--m", cfg.m, "Complex dimension (1..3)");
  CLI::App* curvature = subcommand("curvature", "Curvature endomorphism suite");
  curvature->add_option("--m", cfg.m, "Complex dimension (1..3)");
  CLI::App* cpn = subcommand("cpn", "Projective-space structure form suite");
  cpn->add_option("--m", cfg.m, "Complex dimension (1..3)");
  cpn->add_option("--degree", cfg.degree, "Structure form degree (even)");
  cpn->add_option("--samples", cfg.samples, "Chart sample count");
  cpn->add_option("--h", cfg.h, "Finite-difference step");
  CLI::App* conformal = subcommand("conformal", "Conformal rescaling suite");
  conformal->add_option("--m", cfg.m, "Complex dimension (2..3)");
  subcommand("middim", "Middle-dimension duality suite");
  subcommand("all", "Run every suite with the current configuration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);  // --help and friends
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const std::string sub = app.get_subcommands().front()->get_name();

  std::vector<ckforms::SuiteReport> reports;
  try {
    reports = ckforms::run_suites(sub, cfg);
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 1;
  }

  const std::string payload =
      csv ? ckforms::reports_to_csv(reports) : ckforms::reports_to_json(reports);
  if (out_path.empty()) {
    std::cout << payload;
  } else {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "usage error: cannot open " << out_path << " for writing\n";
      return 2;
    }
    out << payload;
  }

  bool ok = true;
  for (const auto& r : reports) ok = ok && r.passed();
  if (!ok) {
    std::cerr << "failing checks:\n";
    for (const auto& r : reports)
      for (const auto& c : r.checks)
        if (!c.pass)
          std::cerr << "  " << r.suite << '.' << c.name << "  residual " << c.residual
                    << "  tolerance " << c.tolerance << '\n';
    return 1;
  }
  return 0;
}
