#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>

#include "sindyg/graph.hpp"
#include "sindyg/regression.hpp"
#include "sindyg/trajectory.hpp"

namespace sindyg {

// Per-node Stuart-Landau parameters: growth rate sigma and angular frequency
// omega. Coupling strengths come from the graph's edge weights.
struct SLParams {
  Eigen::VectorXd sigma;
  Eigen::VectorXd omega;

  int n_nodes() const { return static_cast<int>(sigma.size()); }
};

// Real decomposition of the coupled Stuart-Landau network. Per node n with
// z_n = x_n + i y_n and in-neighbor coupling k_nm = adjacency(m, n):
//   dx_n = sigma x_n - omega y_n - (x_n^2 + y_n^2) x_n + sum_m k_nm (x_n x_m - y_n y_m)
//   dy_n = omega x_n + sigma y_n - (x_n^2 + y_n^2) y_n + sum_m k_nm (x_n y_m + y_n x_m)
Eigen::VectorXd sl_rhs(const Eigen::VectorXd& state, const SLParams& params,
                       const WeightedGraph& graph);

// RK4 trajectory of the network from x0 over [0, t_end].
Trajectory simulate_sl(const SLParams& params, const WeightedGraph& graph,
                       const Eigen::VectorXd& x0, double t_end, double dt);

// Exact coefficients of the expanded network dynamics in the library's term
// basis; throws if the library cannot represent a required term.
CoefficientMatrix true_coefficients(const SLParams& params,
                                    const WeightedGraph& graph,
                                    const FeatureLibrary& library);

// Per-node uniform draws, sigma for all nodes first, then omega.
SLParams sample_random_params(int n_nodes,
                              std::pair<double, double> sigma_range,
                              std::pair<double, double> omega_range,
                              std::uint64_t seed);

}  // namespace sindyg
