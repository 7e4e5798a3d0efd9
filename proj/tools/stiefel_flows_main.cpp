// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: simulate scenarios to CSV/JSON, verify their
// machine-checkable certificates, and reduce n = 3 trajectories to
// body-frame coordinates.

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "stiefel/integrals.hpp"
#include "stiefel/rigidbody.hpp"
#include "stiefel/scenario.hpp"
#include "stiefel/trajectory_io.hpp"
#include "stiefel/verification.hpp"

namespace {

namespace fs = std::filesystem;
using stiefel::Scenario;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

// Apply the environment seed override to seeded initial states.
void apply_seed_env(Scenario& sc) {
  const char* env = std::getenv("STIEFEL_FLOWS_SEED");
  if (!env) return;
  if (auto* seed = std::get_if<stiefel::InitialSeed>(&sc.initial)) {
    try {
      seed->seed = std::stoull(env);
    } catch (const std::exception&) {
      throw stiefel::ScenarioError("STIEFEL_FLOWS_SEED",
                                   "not an unsigned integer: '" +
                                       std::string(env) + "'");
    }
  }
}

struct TaskOutcome {
  std::string log;
  int code = kExitOk;
};

// Merge per-file exit codes: config errors dominate, then runtime aborts,
// then check failures.
int merge_codes(const std::vector<TaskOutcome>& outcomes) {
  int code = kExitOk;
  for (const auto& o : outcomes) {
    if (o.code == kExitConfig) return kExitConfig;
    if (o.code == kExitRuntime) code = kExitRuntime;
    if (o.code == kExitCheckFailed && code == kExitOk) code = kExitCheckFailed;
  }
  return code;
}

std::string diagnostics_json(const Scenario& sc,
                             const stiefel::DiagnosticsReport& rep) {
  nlohmann::ordered_json j;
  j["scenario"] = sc.name;
  j["max_constraint_residual"] = rep.max_constraint_residual;
  nlohmann::ordered_json ints = nlohmann::ordered_json::array();
  for (const auto& d : rep.integrals)
    ints.push_back({{"name", d.name},
                    {"initial", d.initial},
                    {"max_drift", d.max_drift},
                    {"expected_conserved", d.expected_conserved}});
  j["integrals"] = ints;
  nlohmann::ordered_json traces = nlohmann::ordered_json::array();
  for (const auto& t : rep.lax_traces)
    traces.push_back({{"lambda", t.lam},
                      {"power", t.power},
                      {"max_drift", t.max_drift}});
  j["lax_traces"] = traces;
  return j.dump(2) + "\n";
}

TaskOutcome simulate_one(const std::string& file, const fs::path& out_dir) {
  std::ostringstream log;
  try {
    Scenario sc = stiefel::load_scenario(file);
    apply_seed_env(sc);
    stiefel::CotangentState s0 = stiefel::initial_state(sc);
    stiefel::Trajectory traj = stiefel::integrate(sc.flow, s0, sc.integrator);
    stiefel::DiagnosticsReport rep =
        stiefel::conservation_report(traj, sc.flow, sc.lambdas);

    fs::create_directories(out_dir);
    fs::path csv = out_dir / sc.trajectory_csv;
    fs::path djson = out_dir / sc.diagnostics_json;
    stiefel::write_trajectory_csv(csv, traj, sc.flow);
    std::ofstream(djson) << diagnostics_json(sc, rep);

    log << sc.name << ": " << traj.states.size() << " samples, max residual "
        << rep.max_constraint_residual << "\n"
        << "  wrote " << csv.string() << "\n"
        << "  wrote " << djson.string() << "\n";
    return {log.str(), kExitOk};
  } catch (const stiefel::ScenarioError& e) {
    log << file << ": configuration error: " << e.what() << "\n";
    return {log.str(), kExitConfig};
  } catch (const std::invalid_argument& e) {
    log << file << ": configuration error: " << e.what() << "\n";
    return {log.str(), kExitConfig};
  } catch (const std::exception& e) {
    log << file << ": " << e.what() << "\n";
    return {log.str(), kExitRuntime};
  }
}

TaskOutcome verify_one(const std::string& file) {
  std::ostringstream log;
  try {
    Scenario sc = stiefel::load_scenario(file);
    apply_seed_env(sc);
    log << sc.name << ":\n";
    auto results = stiefel::run_checks(
        sc, [&log](const std::string& line) { log << "  " << line << "\n"; });
    bool all = true;
    for (const auto& r : results) all = all && r.pass;
    return {log.str(), all ? kExitOk : kExitCheckFailed};
  } catch (const stiefel::ScenarioError& e) {
    log << file << ": configuration error: " << e.what() << "\n";
    return {log.str(), kExitConfig};
  } catch (const std::invalid_argument& e) {
    log << file << ": configuration error: " << e.what() << "\n";
    return {log.str(), kExitConfig};
  } catch (const std::exception& e) {
    log << file << ": " << e.what() << "\n";
    return {log.str(), kExitRuntime};
  }
}

// Run one task per file on up to `jobs` threads; print logs in file order.
template <class Fn>
int run_batch(const std::vector<std::string>& files, int jobs, Fn&& task) {
  std::vector<TaskOutcome> outcomes(files.size());
  std::atomic<std::size_t> next{0};
  int workers = std::max(1, std::min<int>(jobs, files.size()));
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < files.size();
           i = next.fetch_add(1))
        outcomes[i] = task(files[i]);
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& o : outcomes) std::cout << o.log;
  return merge_codes(outcomes);
}

int cmd_reduce(const std::string& input, double eta,
               const std::vector<double>& gamma, const std::string& out) {
  try {
    stiefel::Trajectory traj = stiefel::read_trajectory_csv(input);
    if (traj.states.empty() || traj.states.front().n() != 3) {
      std::cerr << input << ": body reduction requires an n = 3 trajectory\n";
      return kExitConfig;
    }
    fs::path out_path = out.empty()
                            ? fs::path(fs::path(input).replace_extension("")
                                           .string() +
                                       "_body.csv")
                            : fs::path(out);
    if (gamma.empty()) {
      stiefel::write_body_csv(out_path, traj, eta, nullptr);
    } else {
      stiefel::Vec3 g(gamma[0], gamma[1], gamma[2]);
      if (g.norm() == 0) {
        std::cerr << "--gamma must be a nonzero direction\n";
        return kExitConfig;
      }
      g.normalize();
      stiefel::write_body_csv(out_path, traj, eta, &g);
    }
    std::cout << "wrote " << out_path.string() << "\n";
    return kExitOk;
  } catch (const std::invalid_argument& e) {
    std::cerr << input << ": " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << input << ": " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Magnetic geodesic, sub-Riemannian, and pendulum-type flows on "
      "two-column orthonormal frames"};
  app.require_subcommand(1);

  std::vector<std::string> sim_files;
  std::string sim_out_dir = ".";
  int sim_jobs = 1;
  auto* sim = app.add_subcommand(
      "simulate", "Integrate scenarios and write trajectory CSV + "
                  "diagnostics JSON");
  sim->add_option("scenarios", sim_files, "Scenario JSON files")
      ->required()
      ->check(CLI::ExistingFile);
  sim->add_option("--out-dir", sim_out_dir, "Output directory");
  sim->add_option("--jobs", sim_jobs, "Parallel scenario workers")
      ->check(CLI::PositiveNumber);

  std::vector<std::string> ver_files;
  int ver_jobs = 1;
  bool list_checks = false;
  auto* ver = app.add_subcommand(
      "verify", "Run a scenario's machine-checkable certificates");
  ver->add_option("scenarios", ver_files, "Scenario JSON files")
      ->check(CLI::ExistingFile);
  ver->add_option("--jobs", ver_jobs, "Parallel scenario workers")
      ->check(CLI::PositiveNumber);
  ver->add_flag("--list-checks", list_checks, "List known checks and exit");

  std::string red_input, red_out;
  double red_eta = 0;
  std::vector<double> red_gamma;
  auto* red = app.add_subcommand(
      "reduce", "Reduce an n = 3 trajectory CSV to body-frame coordinates");
  red->add_option("trajectory", red_input, "Trajectory CSV file")
      ->required()
      ->check(CLI::ExistingFile);
  red->add_option("--eta", red_eta, "Magnetic strength of the flow")
      ->required();
  red->add_option("--gamma", red_gamma,
                  "Fixed space direction to track (three components)")
      ->expected(3);
  red->add_option("--out", red_out, "Output CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp")
      return app.exit(e);
    app.exit(e);
    return kExitConfig;
  }

  if (sim->parsed())
    return run_batch(sim_files, sim_jobs, [&](const std::string& f) {
      return simulate_one(f, sim_out_dir);
    });

  if (ver->parsed()) {
    if (list_checks) {
      for (const auto& c : stiefel::available_checks())
        std::cout << c << "\n";
      return kExitOk;
    }
    if (ver_files.empty()) {
      std::cerr << "verify: no scenario files given\n";
      return kExitConfig;
    }
    return run_batch(ver_files, ver_jobs, verify_one);
  }

  return cmd_reduce(red_input, red_eta, red_gamma, red_out);
}
