#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>

#include "sindyg/graph.hpp"

namespace sindyg {

// Sampled solution of an ODE system: uniform time grid, states X (T×K) and
// derivatives Xdot (T×K). Integrator output carries the exact right-hand
// side evaluated at each saved state, not a finite-difference estimate.
struct Trajectory {
  Eigen::VectorXd times;
  Eigen::MatrixXd states;
  Eigen::MatrixXd derivs;
  StateVariableMap svmap{1, 2};
};

using RhsFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

// Integration aborts with DivergenceError once any state component exceeds
// this magnitude (or turns non-finite).
inline constexpr double kDivergenceLimit = 1e6;

// Classical fixed-step RK4 over [0, t_end], including both endpoints.
Trajectory integrate_rk4(const RhsFn& rhs, const Eigen::VectorXd& x0,
                         double t_end, double dt, const StateVariableMap& svmap);

// Second-order derivative estimate on a uniform grid: central differences in
// the interior, one-sided three-point stencils at the endpoints.
Eigen::MatrixXd finite_diff_derivs(const Eigen::VectorXd& times,
                                   const Eigen::MatrixXd& states);

// Trajectory CSV: header `t,x0,y0,...` then one row per sample; companion
// derivative file with header `t,dx0,dy0,...`. Full double precision.
void save_trajectory(const Trajectory& traj, const std::string& states_path,
                     const std::string& derivs_path);
// derivs_path may be empty; derivative matrix is then left empty.
Trajectory load_trajectory(const std::string& states_path,
                           const std::string& derivs_path = "",
                           int vars_per_node = 2);

}  // namespace sindyg
