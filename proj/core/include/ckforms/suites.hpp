// Copyright 2026 The ckforms Authors
// SPDX-License-Identifier: Apache-2.0
//
// Named check suites bundling the pointwise algebra and the chart geometry
// into reproducible reports. Each runner validates its own parameter space
// and throws std::invalid_argument on unusable combinations so the CLI can
// map those to usage errors.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ckforms/report.hpp"

namespace ckforms {

struct SuiteConfig {
  int m = 2;                     // complex dimension for chart-based suites
  int degree = 2;                // form degree where a suite takes one
  int samples = 50;              // sample plan size
  double h = 5e-3;               // finite-difference step
  std::uint64_t seed = 20260815; // random-jet seed; sampling stays Halton
};

struct SuiteReport {
  std::string suite;
  SuiteConfig config;
  std::vector<CheckResult> checks;
  double wall_time_s = 0.0;

  bool passed() const { return all_pass(checks); }
};

// Exact exterior / Kaehler algebra: bracket closed forms vs. brute-force
// compositions, the Lambda L spectrum, and the big twistor-vs-closed-form
// equivalence sweep on random jets.
SuiteReport run_algebra_suite(const SuiteConfig& cfg);

// The full first/second-order commutator canon on a projective chart.
SuiteReport run_commutator_suite(const SuiteConfig& cfg);

// Curvature endomorphism: eigenvalues, oracles, basis independence,
// finite-difference cross-check and the Weitzenboeck ladder.
SuiteReport run_curvature_suite(const SuiteConfig& cfg);

// Projective-space constructions: eigenfunction, the twistor 2-form built
// from it, special/Killing/Hamiltonian structure, trace recovery, and (at
// m = 3) the degree-4 structure form with its relation battery.
SuiteReport run_cpn_suite(const SuiteConfig& cfg);

// Conformal rescaling of twistor forms on the projective chart and on the
// flat model.
SuiteReport run_conformal_suite(const SuiteConfig& cfg);

// Middle-dimension package: duality invariance, splitting consistency,
// the degree-m special form and its curvature characterization.
SuiteReport run_middim_suite(const SuiteConfig& cfg);

// name is one of algebra|commutators|curvature|cpn|conformal|middim|all.
std::vector<SuiteReport> run_suites(const std::string& name, const SuiteConfig& cfg);

// Serialization. JSON is schema-versioned and byte-stable for fixed inputs
// except for the wall_time_s fields; CSV is one row per check.
std::string reports_to_json(const std::vector<SuiteReport>& reports);
std::string reports_to_csv(const std::vector<SuiteReport>& reports);

}  // namespace ckforms
