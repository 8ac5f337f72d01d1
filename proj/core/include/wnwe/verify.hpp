#pragma once

// Programmatic acceptance checks, run by `wnwe verify`.

#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "wnwe/stepper.hpp"

namespace wnwe {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string measured;
  std::string expected;
};

struct VerifyOptions {
  /// Skip the temporal convergence study.
  bool fast = false;
  /// Applied to every multiplier set built by the unit-modulus check. Lets
  /// tests confirm that a corrupted Cayley factor is caught.
  std::function<void(Multipliers&)> multiplier_hook;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool all_passed() const;
};

VerifyReport verify_suite(const VerifyOptions& options = {});

/// One "PASS|FAIL name: measured (expected)" line per check.
void print_report(const VerifyReport& report, std::ostream& out);

}  // namespace wnwe
