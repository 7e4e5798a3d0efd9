// SPDX-License-Identifier: Apache-2.0
//
// Scenario documents: a single JSON file describing a flow, initial data,
// integrator settings, verification checks, and output targets.  Parsing
// is strict; every error names the offending field.

#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "stiefel/flows.hpp"
#include "stiefel/integrate.hpp"
#include "stiefel/manifold.hpp"

namespace stiefel {

// Seeded random initial state.
struct InitialSeed {
  std::uint64_t seed = 1;
  double momentum_scale = 1.0;
};

using InitialSpec = std::variant<InitialSeed, CotangentState>;

// Tolerances a scenario's verification checks run against.
struct Tolerances {
  double constraints = 1e-10;
  double conservation = 1e-8;
  double lax_trace = 1e-6;
  double lax_residual_factor = 10;  // residual bound = factor * h^2
  double oracle = 1e-9;
  double involution = 1e-7;
  double equivalence = 1e-6;
  double fourth_integral = 1e-6;
};

struct Scenario {
  std::string name;
  FlowSpec flow;
  InitialSpec initial = InitialSeed{};
  IntegratorConfig integrator;
  std::vector<std::string> checks;  // empty -> constraints + conservation
  std::vector<double> lambdas = {0.5, 1.0, 2.0};
  Tolerances tol;
  std::string trajectory_csv;   // empty -> <name>_trajectory.csv
  std::string diagnostics_json; // empty -> <name>_diagnostics.json
};

// Parse error carrying the JSON path of the offending field.
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(const std::string& field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

Scenario parse_scenario(const std::string& json_text);
std::string scenario_to_json(const Scenario& sc);
Scenario load_scenario(const std::filesystem::path& file);

// Materialize the initial state (draws from the seed or validates the
// explicit one).
CotangentState initial_state(const Scenario& sc);

}  // namespace stiefel
