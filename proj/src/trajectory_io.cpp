// SPDX-License-Identifier: Apache-2.0

#include "stiefel/trajectory_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "stiefel/algebra.hpp"
#include "stiefel/integrals.hpp"

namespace stiefel {

std::string format_double(double x) {
  // %.17g always round-trips; trim to the shortest representation that
  // still parses back to the same bits.
  char buf[32];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    double back = 0;
    std::sscanf(buf, "%lf", &back);
    if (back == x) break;
  }
  return buf;
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

void append_block(std::string& row, const Vec& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    row += ',';
    row += format_double(v[i]);
  }
}

}  // namespace

void write_trajectory_csv(const std::filesystem::path& file,
                          const Trajectory& traj, const FlowSpec& flow) {
  require(!traj.states.empty(), "write_trajectory_csv: empty trajectory");
  Eigen::Index n = traj.states.front().n();
  std::ofstream out(file);
  if (!out)
    throw std::runtime_error("cannot write '" + file.string() + "'");

  std::string header = "t";
  for (const char* blk : {"e1", "e2", "p1", "p2"})
    for (Eigen::Index i = 1; i <= n; ++i)
      header += "," + std::string(blk) + "_" + std::to_string(i);
  for (const char* c : {"f11", "f22", "f12", "g11", "g22", "g12"})
    header += "," + std::string(c);
  header += ",H,Psi,J1,J2";
  for (Eigen::Index i = 1; i <= n; ++i)
    for (Eigen::Index j = i + 1; j <= n; ++j)
      header += ",phi_" + std::to_string(i) + "_" + std::to_string(j);
  out << header << "\n";

  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const CotangentState& s = traj.states[k];
    std::string row = format_double(traj.times[k]);
    append_block(row, s.e1);
    append_block(row, s.e2);
    append_block(row, s.p1);
    append_block(row, s.p2);
    for (double r : traj.residuals[k].as_array()) {
      row += ',';
      row += format_double(r);
    }
    Mat phi = momentum_map(s, flow.eta);
    row += ',';
    row += format_double(flow_hamiltonian(flow, s));
    row += ',';
    row += format_double(psi(s));
    row += ',';
    row += format_double(trace_power(phi, 2));
    row += ',';
    row += format_double(trace_power(phi, 4));
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j) {
        row += ',';
        row += format_double(phi(i, j));
      }
    out << row << "\n";
  }
}

Trajectory read_trajectory_csv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in)
    throw std::runtime_error("cannot read '" + file.string() + "'");
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("empty trajectory file '" + file.string() + "'");
  auto cols = split(line, ',');
  // Infer n from the e1_* columns.
  Eigen::Index n = 0;
  for (const auto& c : cols)
    if (c.rfind("e1_", 0) == 0) ++n;
  if (n < 3 || cols.size() < static_cast<std::size_t>(1 + 4 * n + 6))
    throw std::runtime_error("malformed trajectory header in '" +
                             file.string() + "'");

  Trajectory traj;
  double prev_t = 0;
  bool first = true;
  double dt = 0;
  bool uniform = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto vals = split(line, ',');
    if (vals.size() != cols.size())
      throw std::runtime_error("row width mismatch in '" + file.string() +
                               "'");
    std::vector<double> x(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i) {
      const char* b = vals[i].data();
      auto res = std::from_chars(b, b + vals[i].size(), x[i]);
      if (res.ec != std::errc{})
        throw std::runtime_error("bad number '" + vals[i] + "' in '" +
                                 file.string() + "'");
    }
    CotangentState s;
    auto take = [&](std::size_t off) {
      Vec v(n);
      for (Eigen::Index i = 0; i < n; ++i) v[i] = x[off + i];
      return v;
    };
    s.e1 = take(1);
    s.e2 = take(1 + n);
    s.p1 = take(1 + 2 * n);
    s.p2 = take(1 + 3 * n);
    std::size_t roff = 1 + 4 * n;
    ConstraintResidual r{x[roff], x[roff + 1], x[roff + 2],
                         x[roff + 3], x[roff + 4], x[roff + 5]};
    double t = x[0];
    if (!first) {
      double step = t - prev_t;
      if (traj.times.size() == 1)
        dt = step;
      else if (std::abs(step - dt) > 1e-12 * std::max(1.0, std::abs(dt)))
        uniform = false;
    }
    first = false;
    prev_t = t;
    traj.times.push_back(t);
    traj.states.push_back(std::move(s));
    traj.residuals.push_back(r);
  }
  if (traj.states.empty())
    throw std::runtime_error("no samples in '" + file.string() + "'");
  traj.sample_dt =
      uniform && traj.times.size() > 1
          ? dt
          : std::numeric_limits<double>::quiet_NaN();
  return traj;
}

void write_body_csv(const std::filesystem::path& file, const Trajectory& traj,
                    double eta, const Vec3* gamma_space) {
  require(!traj.states.empty(), "write_body_csv: empty trajectory");
  require(traj.states.front().n() == 3,
          "write_body_csv: body reduction requires n = 3");
  std::ofstream out(file);
  if (!out)
    throw std::runtime_error("cannot write '" + file.string() + "'");

  std::string header = "t";
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j)
      header += ",R_" + std::to_string(i) + std::to_string(j);
  for (const char* blk : {"m", "M"})
    for (int i = 1; i <= 3; ++i)
      header += "," + std::string(blk) + "_" + std::to_string(i);
  if (gamma_space)
    for (int i = 1; i <= 3; ++i) header += ",Gamma_" + std::to_string(i);
  header += ",K_sq";  // |M + rotor|^2 with the rotor implied by eta
  out << header << "\n";

  Vec3 rotor(0, 0, -eta);
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    ReducedSample r = reduce_to_so3(traj.states[k]);
    std::string row = format_double(traj.times[k]);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        row += ',';
        row += format_double(r.R(i, j));
      }
    for (int i = 0; i < 3; ++i) {
      row += ',';
      row += format_double(r.m[i]);
    }
    for (int i = 0; i < 3; ++i) {
      row += ',';
      row += format_double(r.M[i]);
    }
    if (gamma_space) {
      Vec3 gb = r.R.transpose() * (*gamma_space);
      for (int i = 0; i < 3; ++i) {
        row += ',';
        row += format_double(gb[i]);
      }
    }
    row += ',';
    row += format_double((r.M + rotor).squaredNorm());
    out << row << "\n";
  }
}

}  // namespace stiefel
