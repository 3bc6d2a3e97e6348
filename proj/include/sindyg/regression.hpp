#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "sindyg/graph.hpp"
#include "sindyg/library.hpp"
#include "sindyg/trajectory.hpp"

namespace sindyg {

struct SolverConfig {
  double lambda = 3e-4;   // ridge strength
  double eta = 1e-3;      // STLSQ threshold, applied to transformed coefficients
  int max_iters = 20;
  double L = 8.0;         // penalty sharpness; 0 gives a uniform penalty of 0.5
  double f_floor = 1e-8;  // lower clamp on penalty entries
  bool normalize_columns = false;

  void validate() const;
};

// Graph-aware penalty, one entry per (term, equation) pair: f(j, i) is the
// weight with which term j is penalized in the equation of state variable i.
// Entries lie in [f_floor, 1]; low source-to-sink connectivity pushes an
// entry toward 1 (strong penalty), high connectivity toward 0.
struct PenaltyMatrix {
  Eigen::MatrixXd f;  // C×K
};

struct CoefficientMatrix {
  Eigen::MatrixXd xi;  // C×K, column k is the sparse coefficient vector of equation k
  std::vector<std::string> term_names;
  std::vector<std::string> var_names;
};

struct FitDiagnostics {
  int iterations = 0;
  std::vector<std::string> warnings;
};

// Sigmoid-shaped connectivity penalty: for term j with source node set N_j
// and target variable i, m = mean over s in N_j of normalized_adjacency
// (s, node_of(i)), and f = 1 / (1 + exp((L/|S_j|) * (m - 0.5))) with |S_j|
// the number of source state variables. The constant term gets exactly 0.5.
PenaltyMatrix compute_penalty(const FeatureLibrary& library,
                              const WeightedGraph& graph,
                              const SolverConfig& config);

// Ridge regression restricted to the active columns: solves
// (Theta_a^T Theta_a + lambda I) beta = Theta_a^T target with a Cholesky
// factorization (column-pivoted QR when lambda == 0). Inactive entries are
// returned as zero.
Eigen::VectorXd ridge_solve(const Eigen::MatrixXd& theta,
                            const Eigen::VectorXd& target, double lambda,
                            const std::vector<bool>& support,
                            FitDiagnostics* diag = nullptr);

// Sequentially thresholded least squares, each target column fit
// independently: ridge solve on the active support, zero entries with
// |coef| < eta, repeat until the support is stable.
Eigen::MatrixXd stlsq(const Eigen::MatrixXd& theta, const Eigen::MatrixXd& xdot,
                      const SolverConfig& config, FitDiagnostics* diag = nullptr);

// Graph-penalized variant. For equation i the columns of Theta are scaled
// by 1/f(:, i), the plain STLSQ loop runs on the scaled problem (threshold
// applied to the transformed coefficients), and the result is mapped back
// by dividing by f(:, i). Equivalent to minimizing
// ||xdot_i - Theta xi||^2 + lambda ||f_i .* xi||^2 on the final support.
Eigen::MatrixXd stlsq_graph(const Eigen::MatrixXd& theta,
                            const Eigen::MatrixXd& xdot,
                            const PenaltyMatrix& penalty,
                            const SolverConfig& config,
                            FitDiagnostics* diag = nullptr);

// Convenience wrappers: evaluate the library, run the solver (with optional
// column normalization), attach names.
CoefficientMatrix fit_sindy(const FeatureLibrary& library,
                            const Eigen::MatrixXd& states,
                            const Eigen::MatrixXd& derivs,
                            const SolverConfig& config,
                            FitDiagnostics* diag = nullptr);
CoefficientMatrix fit_sindyg(const FeatureLibrary& library,
                             const WeightedGraph& graph,
                             const Eigen::MatrixXd& states,
                             const Eigen::MatrixXd& derivs,
                             const SolverConfig& config,
                             FitDiagnostics* diag = nullptr);

// Theta(states) * Xi.
Eigen::MatrixXd predict_derivs(const CoefficientMatrix& model,
                               const FeatureLibrary& library,
                               const Eigen::MatrixXd& states);

// RK4 integration of the discovered model's right-hand side.
Trajectory simulate_model(const CoefficientMatrix& model,
                          const FeatureLibrary& library,
                          const Eigen::VectorXd& x0, double t_end, double dt);

// Fitted-model JSON: var_names, term_names, xi (C rows of K values), solver
// config, and the method name. Round-trips losslessly.
void save_model(const CoefficientMatrix& model, const SolverConfig& config,
                const std::string& method, const std::string& path);

struct LoadedModel {
  CoefficientMatrix model;
  SolverConfig config;
  std::string method;
};
LoadedModel load_model(const std::string& path);

}  // namespace sindyg
