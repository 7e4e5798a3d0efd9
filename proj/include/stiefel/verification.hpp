// SPDX-License-Identifier: Apache-2.0
//
// Named verification checks that run against a scenario: constraint
// fidelity, conservation, Lax trace isospectrality, Lax bracket residual,
// closed-form vs generic field agreement, involution, and the n = 3
// body-flow equivalence.

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "stiefel/scenario.hpp"

namespace stiefel {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;  // worst value vs tolerance, or failure reason
};

// The checks `run_checks` understands, in execution order.
std::vector<std::string> available_checks();

// Run the scenario's checks (or the default pair when none are listed).
// `log` receives one line per check as it completes; pass nullptr to
// silence.  Unknown check names throw ScenarioError.
std::vector<CheckResult> run_checks(
    const Scenario& sc,
    const std::function<void(const std::string&)>& log = nullptr);

}  // namespace stiefel
