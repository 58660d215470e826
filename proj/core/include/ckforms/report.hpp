// Copyright 2026 The ckforms Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

namespace ckforms {

// One named identity evaluated over a sample plan. `anchor` is a stable
// machine-readable id for the underlying statement; `name` may carry
// parameters (degree, model, ...). `residual` is the worst relative defect
// seen. A skipped check records why it could not run (degenerate coefficient,
// inapplicable degree) and counts as passing.
struct CheckResult {
  std::string name;
  std::string anchor;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  bool skipped = false;
};

inline CheckResult make_check(std::string name, std::string anchor, double residual,
                              double tolerance) {
  CheckResult c;
  c.name = std::move(name);
  c.anchor = std::move(anchor);
  c.residual = residual;
  c.tolerance = tolerance;
  c.pass = residual <= tolerance;
  return c;
}

inline CheckResult skip_check(std::string name, std::string anchor) {
  CheckResult c;
  c.name = std::move(name);
  c.anchor = std::move(anchor);
  c.pass = true;
  c.skipped = true;
  return c;
}

inline bool all_pass(const std::vector<CheckResult>& checks) {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

}  // namespace ckforms
