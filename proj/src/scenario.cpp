// SPDX-License-Identifier: Apache-2.0

#include "stiefel/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace stiefel {

using Json = nlohmann::ordered_json;

namespace {

/* ------------------------------------------------------------- field access */

const Json& need(const Json& j, const std::string& key,
                 const std::string& path) {
  if (!j.contains(key)) throw ScenarioError(path + key, "missing field");
  return j.at(key);
}

double num(const Json& j, const std::string& path) {
  if (!j.is_number()) throw ScenarioError(path, "expected a number");
  return j.get<double>();
}

double num_at(const Json& j, const std::string& key, const std::string& path,
              double fallback) {
  if (!j.contains(key)) return fallback;
  return num(j.at(key), path + key);
}

std::vector<double> num_array(const Json& j, const std::string& path,
                              int expected = -1) {
  if (!j.is_array()) throw ScenarioError(path, "expected an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw ScenarioError(path, "expected numeric entries");
    out.push_back(v.get<double>());
  }
  if (expected >= 0 && static_cast<int>(out.size()) != expected)
    throw ScenarioError(path, "expected " + std::to_string(expected) +
                                  " entries, got " +
                                  std::to_string(out.size()));
  return out;
}

Vec vec_of(const Json& j, const std::string& path, Eigen::Index n) {
  auto raw = num_array(j, path, static_cast<int>(n));
  return Eigen::Map<const Vec>(raw.data(), n);
}

Mat hat3(const Eigen::Vector3d& v) {
  Mat m = Mat::Zero(3, 3);
  m(0, 1) = -v[2];
  m(1, 0) = v[2];
  m(0, 2) = v[1];
  m(2, 0) = -v[1];
  m(1, 2) = -v[0];
  m(2, 1) = v[0];
  return m;
}

/* ---------------------------------------------------------------- potential */

PotentialSpec parse_potential(const Json& j, Eigen::Index n,
                              const std::string& path) {
  std::string type = need(j, "type", path).get<std::string>();
  if (type == "none") return PotentialSpec{};
  if (type == "pendulum_1") {
    PendulumIPotential pot;
    if (j.contains("coupling")) {
      const Json& rows = j.at("coupling");
      if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != n)
        throw ScenarioError(path + "coupling",
                            "expected " + std::to_string(n) + " rows");
      pot.coupling.resize(n, n);
      for (Eigen::Index i = 0; i < n; ++i)
        pot.coupling.row(i) =
            vec_of(rows.at(i), path + "coupling", n).transpose();
    } else if (j.contains("axis")) {
      if (n != 3)
        throw ScenarioError(path + "axis",
                            "axis shorthand is only available at n = 3");
      Eigen::Vector3d axis = vec_of(need(j, "axis", path), path + "axis", 3);
      if (axis.norm() == 0)
        throw ScenarioError(path + "axis", "axis must be nonzero");
      axis.normalize();
      double strength = num(need(j, "strength", path), path + "strength");
      pot.coupling = strength * hat3(axis);
    } else {
      throw ScenarioError(path, "pendulum_1 needs 'coupling' or 'axis'");
    }
    return pot;
  }
  if (type == "pendulum_2") {
    PendulumIIPotential pot;
    pot.chi1 = num(need(j, "chi1", path), path + "chi1");
    pot.chi2 = num(need(j, "chi2", path), path + "chi2");
    pot.gamma1 = vec_of(need(j, "gamma1", path), path + "gamma1", n);
    pot.gamma2 = vec_of(need(j, "gamma2", path), path + "gamma2", n);
    return pot;
  }
  throw ScenarioError(path + "type", "unknown potential type '" + type + "'");
}

Json potential_json(const PotentialSpec& pot) {
  Json j;
  if (const auto* p1 = std::get_if<PendulumIPotential>(&pot)) {
    j["type"] = "pendulum_1";
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < p1->coupling.rows(); ++i) {
      Json row = Json::array();
      for (Eigen::Index k = 0; k < p1->coupling.cols(); ++k)
        row.push_back(p1->coupling(i, k));
      rows.push_back(row);
    }
    j["coupling"] = rows;
  } else if (const auto* p2 = std::get_if<PendulumIIPotential>(&pot)) {
    j["type"] = "pendulum_2";
    j["chi1"] = p2->chi1;
    j["chi2"] = p2->chi2;
    j["gamma1"] = std::vector<double>(p2->gamma1.data(),
                                      p2->gamma1.data() + p2->gamma1.size());
    j["gamma2"] = std::vector<double>(p2->gamma2.data(),
                                      p2->gamma2.data() + p2->gamma2.size());
  } else {
    j["type"] = "none";
  }
  return j;
}

/* --------------------------------------------------------------------- flow */

FlowFamily parse_family(const Json& j, Eigen::Index n,
                        const std::string& path) {
  std::string family = need(j, "family", path).get<std::string>();
  if (family == "riemannian_a") {
    RiemannianAFlow f;
    if (j.contains("manakov")) {
      const Json& mk = j.at("manakov");
      ManakovData d;
      auto al = num_array(need(mk, "alpha", path + "manakov."),
                          path + "manakov.alpha", 3);
      auto be = num_array(need(mk, "beta", path + "manakov."),
                          path + "manakov.beta", 3);
      d.alpha = Eigen::Vector3d(al[0], al[1], al[2]);
      d.beta = Eigen::Vector3d(be[0], be[1], be[2]);
      f.a = manakov_to_params(d);
    } else {
      auto a = num_array(need(j, "a", path), path + "a", 4);
      f.a = {a[0], a[1], a[2], a[3]};
    }
    if (j.contains("potential"))
      f.potential = parse_potential(j.at("potential"), n, path + "potential.");
    return f;
  }
  if (family == "so3_quad_b") {
    auto b = num_array(need(j, "b", path), path + "b", 6);
    return SO3QuadBFlow{{b[0], b[1], b[2], b[3], b[4], b[5]}};
  }
  if (family == "subr_h") {
    auto a = num_array(need(j, "a", path), path + "a", 3);
    return SubRHFlow{{a[0], a[1], a[2]}};
  }
  if (family == "subr_d0") {
    auto a = num_array(need(j, "a", path), path + "a", 2);
    return SubRD0Flow{{a[0], a[1]}};
  }
  if (family == "natural") {
    NaturalFlow f;
    f.kappa = num(need(j, "kappa", path), path + "kappa");
    if (j.contains("potential"))
      f.potential = parse_potential(j.at("potential"), n, path + "potential.");
    return f;
  }
  throw ScenarioError(path + "family", "unknown flow family '" + family + "'");
}

Json family_json(const FlowFamily& fam) {
  Json j;
  if (const auto* r = std::get_if<RiemannianAFlow>(&fam)) {
    j["family"] = "riemannian_a";
    j["a"] = {r->a.a1, r->a.a2, r->a.a3, r->a.a4};
    if (has_potential(r->potential))
      j["potential"] = potential_json(r->potential);
  } else if (const auto* b = std::get_if<SO3QuadBFlow>(&fam)) {
    j["family"] = "so3_quad_b";
    j["b"] = {b->b.b1, b->b.b2, b->b.b3, b->b.b4, b->b.b5, b->b.b6};
  } else if (const auto* sh = std::get_if<SubRHFlow>(&fam)) {
    j["family"] = "subr_h";
    j["a"] = {sh->a.a1, sh->a.a2, sh->a.a4};
  } else if (const auto* sd = std::get_if<SubRD0Flow>(&fam)) {
    j["family"] = "subr_d0";
    j["a"] = {sd->a.a1, sd->a.a3};
  } else {
    const auto& nf = std::get<NaturalFlow>(fam);
    j["family"] = "natural";
    j["kappa"] = nf.kappa;
    if (has_potential(nf.potential))
      j["potential"] = potential_json(nf.potential);
  }
  return j;
}

}  // namespace

/* -------------------------------------------------------------------- parse */

Scenario parse_scenario(const std::string& json_text) {
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ScenarioError("(document)", e.what());
  }
  if (!j.is_object()) throw ScenarioError("(document)", "expected an object");

  Scenario sc;
  sc.name = need(j, "name", "").get<std::string>();
  if (sc.name.empty()) throw ScenarioError("name", "must be nonempty");
  double nd = num(need(j, "n", ""), "n");
  if (nd != std::floor(nd) || nd < 3)
    throw ScenarioError("n", "must be an integer >= 3");
  sc.flow.n = static_cast<Eigen::Index>(nd);
  sc.flow.eta = num_at(j, "eta", "", 0.0);
  sc.flow.family = parse_family(need(j, "flow", ""), sc.flow.n, "flow.");
  try {
    validate_flow(sc.flow);
  } catch (const std::invalid_argument& e) {
    throw ScenarioError("flow", e.what());
  }

  if (j.contains("initial_state")) {
    const Json& init = j.at("initial_state");
    if (init.contains("seed")) {
      InitialSeed seed;
      seed.seed = need(init, "seed", "initial_state.").get<std::uint64_t>();
      seed.momentum_scale =
          num_at(init, "momentum_scale", "initial_state.", 1.0);
      sc.initial = seed;
    } else {
      CotangentState s;
      s.e1 = vec_of(need(init, "e1", "initial_state."), "initial_state.e1",
                    sc.flow.n);
      s.e2 = vec_of(need(init, "e2", "initial_state."), "initial_state.e2",
                    sc.flow.n);
      s.p1 = vec_of(need(init, "p1", "initial_state."), "initial_state.p1",
                    sc.flow.n);
      s.p2 = vec_of(need(init, "p2", "initial_state."), "initial_state.p2",
                    sc.flow.n);
      if (!on_manifold(s, 1e-8))
        throw ScenarioError("initial_state",
                            "explicit state violates the constraints");
      sc.initial = s;
    }
  }

  if (j.contains("integrator")) {
    const Json& ji = j.at("integrator");
    IntegratorConfig& c = sc.integrator;
    c.h = num_at(ji, "h", "integrator.", c.h);
    c.T = num_at(ji, "T", "integrator.", c.T);
    c.projection_interval = static_cast<int>(num_at(
        ji, "projection_interval", "integrator.", c.projection_interval));
    c.newton_tol = num_at(ji, "newton_tol", "integrator.", c.newton_tol);
    c.newton_max_iter = static_cast<int>(
        num_at(ji, "newton_max_iter", "integrator.", c.newton_max_iter));
    c.record_stride = static_cast<int>(
        num_at(ji, "record_stride", "integrator.", c.record_stride));
    c.abort_residual =
        num_at(ji, "abort_residual", "integrator.", c.abort_residual);
    if (ji.contains("adaptive")) {
      if (!ji.at("adaptive").is_boolean())
        throw ScenarioError("integrator.adaptive", "expected a boolean");
      c.adaptive = ji.at("adaptive").get<bool>();
    }
    c.adaptive_rtol =
        num_at(ji, "adaptive_rtol", "integrator.", c.adaptive_rtol);
    if (!(c.h > 0) || !(c.T > 0))
      throw ScenarioError("integrator", "h and T must be positive");
  }

  if (j.contains("verify")) {
    const Json& jv = j.at("verify");
    if (jv.contains("checks")) {
      for (const auto& c : jv.at("checks")) {
        if (!c.is_string())
          throw ScenarioError("verify.checks", "expected strings");
        sc.checks.push_back(c.get<std::string>());
      }
    }
    if (jv.contains("lambdas"))
      sc.lambdas = num_array(jv.at("lambdas"), "verify.lambdas");
    if (jv.contains("tolerances")) {
      const Json& jt = jv.at("tolerances");
      Tolerances& t = sc.tol;
      t.constraints = num_at(jt, "constraints", "verify.tolerances.",
                             t.constraints);
      t.conservation = num_at(jt, "conservation", "verify.tolerances.",
                              t.conservation);
      t.lax_trace = num_at(jt, "lax_trace", "verify.tolerances.", t.lax_trace);
      t.lax_residual_factor = num_at(jt, "lax_residual_factor",
                                     "verify.tolerances.",
                                     t.lax_residual_factor);
      t.oracle = num_at(jt, "oracle", "verify.tolerances.", t.oracle);
      t.involution = num_at(jt, "involution", "verify.tolerances.",
                            t.involution);
      t.equivalence = num_at(jt, "equivalence", "verify.tolerances.",
                             t.equivalence);
      t.fourth_integral = num_at(jt, "fourth_integral", "verify.tolerances.",
                                 t.fourth_integral);
    }
  }

  if (j.contains("output")) {
    const Json& jo = j.at("output");
    if (jo.contains("trajectory_csv"))
      sc.trajectory_csv = jo.at("trajectory_csv").get<std::string>();
    if (jo.contains("diagnostics_json"))
      sc.diagnostics_json = jo.at("diagnostics_json").get<std::string>();
  }
  if (sc.trajectory_csv.empty())
    sc.trajectory_csv = sc.name + "_trajectory.csv";
  if (sc.diagnostics_json.empty())
    sc.diagnostics_json = sc.name + "_diagnostics.json";
  return sc;
}

std::string scenario_to_json(const Scenario& sc) {
  Json j;
  j["name"] = sc.name;
  j["n"] = static_cast<long>(sc.flow.n);
  j["eta"] = sc.flow.eta;
  j["flow"] = family_json(sc.flow.family);

  Json init;
  if (const auto* seed = std::get_if<InitialSeed>(&sc.initial)) {
    init["seed"] = seed->seed;
    init["momentum_scale"] = seed->momentum_scale;
  } else {
    const auto& s = std::get<CotangentState>(sc.initial);
    auto arr = [](const Vec& v) {
      return std::vector<double>(v.data(), v.data() + v.size());
    };
    init["e1"] = arr(s.e1);
    init["e2"] = arr(s.e2);
    init["p1"] = arr(s.p1);
    init["p2"] = arr(s.p2);
  }
  j["initial_state"] = init;

  const IntegratorConfig& c = sc.integrator;
  j["integrator"] = {{"h", c.h},
                     {"T", c.T},
                     {"projection_interval", c.projection_interval},
                     {"newton_tol", c.newton_tol},
                     {"newton_max_iter", c.newton_max_iter},
                     {"record_stride", c.record_stride},
                     {"abort_residual", c.abort_residual},
                     {"adaptive", c.adaptive},
                     {"adaptive_rtol", c.adaptive_rtol}};

  const Tolerances& t = sc.tol;
  j["verify"] = {{"checks", sc.checks},
                 {"lambdas", sc.lambdas},
                 {"tolerances",
                  {{"constraints", t.constraints},
                   {"conservation", t.conservation},
                   {"lax_trace", t.lax_trace},
                   {"lax_residual_factor", t.lax_residual_factor},
                   {"oracle", t.oracle},
                   {"involution", t.involution},
                   {"equivalence", t.equivalence},
                   {"fourth_integral", t.fourth_integral}}}};

  j["output"] = {{"trajectory_csv", sc.trajectory_csv},
                 {"diagnostics_json", sc.diagnostics_json}};
  return j.dump(2) + "\n";
}

Scenario load_scenario(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in)
    throw ScenarioError("(file)", "cannot open '" + file.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

CotangentState initial_state(const Scenario& sc) {
  if (const auto* seed = std::get_if<InitialSeed>(&sc.initial))
    return random_state(sc.flow.n, seed->seed, seed->momentum_scale);
  return std::get<CotangentState>(sc.initial);
}

}  // namespace stiefel
