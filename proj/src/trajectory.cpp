#include "sindyg/trajectory.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "sindyg/errors.hpp"
#include "io_util.hpp"

namespace sindyg {

namespace {

bool state_admissible(const Eigen::VectorXd& x) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x(i)) || std::abs(x(i)) > kDivergenceLimit) return false;
  }
  return true;
}

}  // namespace

Trajectory integrate_rk4(const RhsFn& rhs, const Eigen::VectorXd& x0,
                         double t_end, double dt, const StateVariableMap& svmap) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be positive");
  if (x0.size() != svmap.total()) {
    throw std::invalid_argument("initial state size does not match state map");
  }

  const auto n_steps = static_cast<Eigen::Index>(std::llround(t_end / dt));
  const Eigen::Index t_count = n_steps + 1;
  const Eigen::Index k = x0.size();

  Trajectory traj;
  traj.svmap = svmap;
  traj.times.resize(t_count);
  traj.states.resize(t_count, k);
  traj.derivs.resize(t_count, k);

  Eigen::VectorXd x = x0;
  for (Eigen::Index i = 0; i < t_count; ++i) {
    const double t = static_cast<double>(i) * dt;
    if (!state_admissible(x)) {
      throw DivergenceError("state diverged at t = " + detail::fmt_double(t), t);
    }
    traj.times(i) = t;
    traj.states.row(i) = x.transpose();
    const Eigen::VectorXd k1 = rhs(x);
    traj.derivs.row(i) = k1.transpose();
    if (i == n_steps) break;
    const Eigen::VectorXd k2 = rhs(x + (dt / 2.0) * k1);
    const Eigen::VectorXd k3 = rhs(x + (dt / 2.0) * k2);
    const Eigen::VectorXd k4 = rhs(x + dt * k3);
    x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return traj;
}

Eigen::MatrixXd finite_diff_derivs(const Eigen::VectorXd& times,
                                   const Eigen::MatrixXd& states) {
  const auto t_count = times.size();
  if (t_count < 3) throw std::invalid_argument("need at least 3 samples");
  if (states.rows() != t_count) {
    throw std::invalid_argument("times and states row counts differ");
  }
  const double h = times(1) - times(0);
  if (!(h > 0.0)) throw std::invalid_argument("times must be strictly increasing");
  for (Eigen::Index i = 1; i + 1 < t_count; ++i) {
    const double hi = times(i + 1) - times(i);
    if (std::abs(hi - h) > 1e-9 * std::max(1.0, std::abs(h))) {
      throw std::invalid_argument("finite differences require a uniform time grid");
    }
  }

  Eigen::MatrixXd d(t_count, states.cols());
  d.row(0) = (-3.0 * states.row(0) + 4.0 * states.row(1) - states.row(2)) / (2.0 * h);
  for (Eigen::Index i = 1; i + 1 < t_count; ++i) {
    d.row(i) = (states.row(i + 1) - states.row(i - 1)) / (2.0 * h);
  }
  d.row(t_count - 1) = (3.0 * states.row(t_count - 1) -
                        4.0 * states.row(t_count - 2) +
                        states.row(t_count - 3)) /
                       (2.0 * h);
  return d;
}

namespace {

void write_matrix_csv(const std::string& path, const Eigen::VectorXd& times,
                      const Eigen::MatrixXd& values,
                      const std::vector<std::string>& col_names,
                      const std::string& prefix) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open " + path + " for writing");
  out << "t";
  for (const auto& name : col_names) out << "," << prefix << name;
  out << "\n";
  for (Eigen::Index i = 0; i < times.size(); ++i) {
    out << detail::fmt_double(times(i));
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      out << "," << detail::fmt_double(values(i, j));
    }
    out << "\n";
  }
  if (!out) throw FormatError("write to " + path + " failed");
}

std::pair<Eigen::VectorXd, Eigen::MatrixXd> read_matrix_csv(
    const std::string& path, int* n_cols_out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  std::string header;
  if (!std::getline(in, header)) throw FormatError(path + ": empty file");
  const auto head_fields = detail::split_csv_line(header);
  if (head_fields.size() < 2 || head_fields[0] != "t") {
    throw FormatError(path + ":1: expected header starting with `t,`");
  }
  const int n_cols = static_cast<int>(head_fields.size()) - 1;

  std::vector<double> times;
  std::vector<double> flat;
  std::string line;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = detail::split_csv_line(line);
    if (static_cast<int>(fields.size()) != n_cols + 1) {
      throw FormatError(path + ":" + std::to_string(line_no) + ": expected " +
                        std::to_string(n_cols + 1) + " fields, got " +
                        std::to_string(fields.size()));
    }
    for (std::size_t f = 0; f < fields.size(); ++f) {
      std::size_t pos = 0;
      double v = 0.0;
      try {
        v = std::stod(fields[f], &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos != fields[f].size() || fields[f].empty()) {
        throw FormatError(path + ":" + std::to_string(line_no) + ": column " +
                          std::to_string(f + 1) + ": not a number");
      }
      if (f == 0) {
        times.push_back(v);
      } else {
        flat.push_back(v);
      }
    }
  }
  if (times.empty()) throw FormatError(path + ": no data rows");

  Eigen::VectorXd t(times.size());
  Eigen::MatrixXd m(times.size(), n_cols);
  for (std::size_t i = 0; i < times.size(); ++i) {
    t(i) = times[i];
    for (int j = 0; j < n_cols; ++j) m(i, j) = flat[i * n_cols + j];
  }
  *n_cols_out = n_cols;
  return {std::move(t), std::move(m)};
}

}  // namespace

void save_trajectory(const Trajectory& traj, const std::string& states_path,
                     const std::string& derivs_path) {
  const auto names = traj.svmap.var_names();
  write_matrix_csv(states_path, traj.times, traj.states, names, "");
  if (!derivs_path.empty()) {
    write_matrix_csv(derivs_path, traj.times, traj.derivs, names, "d");
  }
}

Trajectory load_trajectory(const std::string& states_path,
                           const std::string& derivs_path, int vars_per_node) {
  Trajectory traj;
  int n_cols = 0;
  auto [t, states] = read_matrix_csv(states_path, &n_cols);
  if (n_cols % vars_per_node != 0) {
    throw FormatError(states_path + ": column count " + std::to_string(n_cols) +
                      " is not a multiple of vars per node");
  }
  traj.svmap = StateVariableMap(n_cols / vars_per_node, vars_per_node);
  traj.times = std::move(t);
  traj.states = std::move(states);
  if (!derivs_path.empty()) {
    int d_cols = 0;
    auto [td, derivs] = read_matrix_csv(derivs_path, &d_cols);
    if (d_cols != n_cols || td.size() != traj.times.size()) {
      throw FormatError(derivs_path + ": shape does not match " + states_path);
    }
    traj.derivs = std::move(derivs);
  }
  return traj;
}

}  // namespace sindyg
