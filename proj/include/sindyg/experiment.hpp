#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sindyg/metrics.hpp"
#include "sindyg/oscillator.hpp"
#include "sindyg/regression.hpp"

namespace sindyg {

// Everything a study run depends on. A config plus its seed fully
// determines all outputs; per-repetition randomness derives from
// (seed, value index, repetition index).
struct ExperimentConfig {
  // graph generation
  std::string graph_type = "er";  // "er" | "sf"
  int n_nodes = 5;
  double edge_prob = 0.3;
  int m_attach = 2;
  double w_min = 0.05;
  double w_max = 0.2;

  // node dynamics
  double sigma_min = 0.1;
  double sigma_max = 0.5;
  double omega_min = 1.5707963267948966;   // pi/2
  double omega_max = 12.566370614359172;   // 4*pi
  double simple_coupling = 0.2;            // edge weight of the 3-node case

  // solver
  SolverConfig solver;
  int degree = 3;

  // protocol
  double t_end = 20.0;
  double dt = 0.01;
  double test_t_end = 5.0;
  int n_test = 2;
  int reps = 20;
  std::uint64_t seed = 0;
  bool finite_diff = false;  // train on finite-difference derivatives

  std::string out_dir = "out";
};

struct SweepSpec {
  std::string param;  // n_nodes | max_edge_weight | L | train_length
  std::vector<double> values;
  int reps = 20;
};

// Scored pair of fits on one dataset.
struct MethodResult {
  CoefficientMatrix model;
  MetricsReport metrics;
  bool failed = false;
  std::string failure;
};

struct RunResult {
  MethodResult sindy;
  MethodResult sindyg;
};

struct SimpleCaseResult {
  CoefficientMatrix truth;
  RunResult run;
  // Per-test-trajectory derivative R^2 for each method.
  std::vector<double> sindy_test_r2;
  std::vector<double> sindyg_test_r2;
};

// The three-node study: builds the fixed two-connected-one-isolated network,
// simulates training data, fits both methods, scores them on unseen
// trajectories, and writes coefficient/metric/trajectory CSVs plus model
// JSON files into out_dir.
SimpleCaseResult run_simple_case(const ExperimentConfig& config);

// Randomized-network study sweeping one parameter. Writes per-run rows and
// mean/standard-error aggregate rows (sweep.csv) into out_dir.
void run_general_sweep(const ExperimentConfig& config, const SweepSpec& sweep);

// One (graph type, method) cell of the ensemble study.
struct EnsembleCell {
  std::vector<MetricsReport> runs;  // successful repetitions only
  int n_failed = 0;
};

struct Table1Result {
  EnsembleCell er_sindy, er_sindyg, sf_sindy, sf_sindyg;
};

// ER and SF ensembles at fixed size, both methods; writes per-run rows
// (table1_runs.csv) and the metric-by-column summary (table1.csv).
Table1Result run_table1(const ExperimentConfig& config);

// Single randomized repetition of the general protocol: generate graph and
// parameters, simulate train/test data, fit and score both methods.
// Divergence failures are captured in the result, not thrown.
RunResult run_general_rep(const ExperimentConfig& config, std::uint64_t rep_seed,
                          const std::string& dataset_id);

// Deterministic initial condition: uniform in [-1, 1] per state variable.
Eigen::VectorXd random_initial_state(int k_total, std::uint64_t seed);

// Derivative-space comparison of the discovered model against the true
// system from one initial condition: both are integrated with the same
// step, and the R^2/MSE of their derivative trajectories is returned.
std::pair<double, double> test_trajectory_score(
    const CoefficientMatrix& model, const FeatureLibrary& library,
    const SLParams& params, const WeightedGraph& graph,
    const Eigen::VectorXd& x0, double t_end, double dt);

}  // namespace sindyg
