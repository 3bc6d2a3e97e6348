#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <vector>

#include "sindyg/errors.hpp"
#include "sindyg/experiment.hpp"
#include "sindyg/metrics.hpp"
#include "sindyg/oscillator.hpp"
#include "sindyg/regression.hpp"
#include "sindyg/rng.hpp"
#include "sindyg/trajectory.hpp"

namespace {

using namespace sindyg;

// Seed tags shared with the experiment harness so `simulate --seed S` draws
// the same initial condition and parameters as `experiment simple --seed S`.
constexpr std::uint64_t kTagTrainIc = 1;
constexpr std::uint64_t kTagParams = 3;

struct CommonOpts {
  ExperimentConfig config;
  std::vector<double> sigma_range;
  std::vector<double> omega_range;
  std::string config_path;
};

// Flat key=value config file support: `--config file` expands into
// `--key=value` tokens inserted ahead of the explicit flags, so with
// take-last semantics the command line overrides the file.
std::vector<std::string> expand_config_args(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string path;
  std::size_t at = args.size();
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      at = i;
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      at = i;
      break;
    }
  }
  if (path.empty()) return args;

  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path);
  std::vector<std::string> expanded;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    const std::string entry = line.substr(first, last - first + 1);
    const auto eq = entry.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw std::invalid_argument(path + ":" + std::to_string(line_no) +
                                  ": expected key=value");
    }
    expanded.push_back("--" + entry.substr(0, eq) + "=" + entry.substr(eq + 1));
  }

  // Insert before the first flag token so explicit flags come later.
  std::size_t insert_at = 0;
  while (insert_at < args.size() && args[insert_at].rfind("-", 0) != 0) {
    ++insert_at;
  }
  insert_at = std::min(insert_at, at);
  std::vector<std::string> out(args.begin(), args.begin() + insert_at);
  out.insert(out.end(), expanded.begin(), expanded.end());
  out.insert(out.end(), args.begin() + insert_at, args.end());
  return out;
}

void add_solver_flags(CLI::App* cmd, SolverConfig& solver, int* degree) {
  cmd->add_option("--lambda", solver.lambda, "Ridge strength");
  cmd->add_option("--eta", solver.eta, "STLSQ threshold");
  cmd->add_option("--penalty-L", solver.L, "Penalty sharpness L");
  cmd->add_option("--max-iters", solver.max_iters, "STLSQ iteration cap");
  cmd->add_flag("--normalize-columns", solver.normalize_columns,
                "Normalize library columns before fitting");
  if (degree != nullptr) {
    cmd->add_option("--degree", *degree, "Polynomial library degree");
  }
}

void add_experiment_flags(CLI::App* cmd, CommonOpts& opts) {
  auto& c = opts.config;
  cmd->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  cmd->add_option("--config", opts.config_path, "Flat key=value config file");
  cmd->add_option("--seed", c.seed, "Base seed");
  cmd->add_option("--out-dir", c.out_dir, "Output directory");
  cmd->add_option("--dt", c.dt, "Integration step");
  cmd->add_option("--t-end", c.t_end, "Training trajectory length (s)");
  cmd->add_option("--test-t-end", c.test_t_end, "Test trajectory length (s)");
  cmd->add_option("--n-test", c.n_test, "Unseen test trajectories per fit");
  cmd->add_option("--reps", c.reps, "Repetitions per configuration");
  cmd->add_option("--graph-type", c.graph_type, "er | sf")
      ->check(CLI::IsMember({"er", "sf"}));
  cmd->add_option("--n-nodes", c.n_nodes, "Network size");
  cmd->add_option("--edge-prob", c.edge_prob, "ER edge probability");
  cmd->add_option("--m-attach", c.m_attach, "SF attachments per node");
  cmd->add_option("--w-min", c.w_min, "Minimum edge weight");
  cmd->add_option("--w-max", c.w_max, "Maximum edge weight");
  cmd->add_option("--k-simple", c.simple_coupling, "Simple-case coupling weight");
  cmd->add_option("--sigma-range", opts.sigma_range, "sigma range lo,hi")
      ->delimiter(',')
      ->expected(2);
  cmd->add_option("--omega-range", opts.omega_range, "omega range lo,hi")
      ->delimiter(',')
      ->expected(2);
  cmd->add_flag("--fd", c.finite_diff,
                "Train on finite-difference derivatives");
  add_solver_flags(cmd, c.solver, &c.degree);
}

void apply_ranges(CommonOpts& opts) {
  if (!opts.sigma_range.empty()) {
    opts.config.sigma_min = opts.sigma_range[0];
    opts.config.sigma_max = opts.sigma_range[1];
  }
  if (!opts.omega_range.empty()) {
    opts.config.omega_min = opts.omega_range[0];
    opts.config.omega_max = opts.omega_range[1];
  }
}

SLParams resolve_params(int n_nodes, const std::vector<double>& sigma,
                        const std::vector<double>& omega,
                        const std::vector<double>& sigma_range,
                        const std::vector<double>& omega_range,
                        std::uint64_t seed) {
  SLParams params;
  const auto fill = [n_nodes](const std::vector<double>& values,
                              const char* name) {
    Eigen::VectorXd v(n_nodes);
    if (values.size() == 1) {
      v.setConstant(values[0]);
    } else if (static_cast<int>(values.size()) == n_nodes) {
      for (int i = 0; i < n_nodes; ++i) v(i) = values[i];
    } else {
      throw std::invalid_argument(std::string(name) +
                                  " needs 1 or n_nodes values");
    }
    return v;
  };
  if (!sigma.empty() && !omega.empty()) {
    params.sigma = fill(sigma, "--sigma");
    params.omega = fill(omega, "--omega");
    return params;
  }
  if (!sigma.empty() || !omega.empty()) {
    throw std::invalid_argument("--sigma and --omega must be given together");
  }
  std::pair<double, double> sr{0.1, 0.5}, wr{1.5707963267948966,
                                             12.566370614359172};
  if (!sigma_range.empty()) sr = {sigma_range[0], sigma_range[1]};
  if (!omega_range.empty()) wr = {omega_range[0], omega_range[1]};
  return sample_random_params(n_nodes, sr, wr, derive_seed(seed, kTagParams));
}

// Rebuild the evaluation library for a stored model: infer the degree from
// the term count and check the stored term names against the canonical
// ordering.
FeatureLibrary library_for_model(const CoefficientMatrix& model,
                                 int vars_per_node) {
  const int k = static_cast<int>(model.var_names.size());
  if (k < 1 || k % vars_per_node != 0) {
    throw FormatError("model var_names not compatible with vars per node");
  }
  const StateVariableMap svmap(k / vars_per_node, vars_per_node);
  for (int degree = 1; degree <= 12; ++degree) {
    const FeatureLibrary lib = build_library(svmap, degree);
    if (lib.size() == static_cast<int>(model.term_names.size())) {
      if (lib.term_names() != model.term_names) {
        throw FormatError("model term names do not follow the canonical order");
      }
      return lib;
    }
    if (lib.size() > static_cast<int>(model.term_names.size())) break;
  }
  throw FormatError("model term count matches no polynomial library degree");
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Sparse identification of graph-structured dynamics"};
  app.require_subcommand(1);

  // ---- simulate ----
  auto* sim = app.add_subcommand(
      "simulate", "Integrate a coupled oscillator network to trajectory CSV");
  sim->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  std::string sim_config_path;
  sim->add_option("--config", sim_config_path, "Flat key=value config file");
  struct {
    std::string graph_path;
    std::string out_dir = "out";
    std::vector<double> sigma, omega, sigma_range, omega_range, x0;
    double t_end = 20.0, dt = 0.01;
    std::uint64_t seed = 0;
  } sim_opts;
  sim->add_option("--graph", sim_opts.graph_path, "Graph CSV")->required();
  sim->add_option("--out-dir", sim_opts.out_dir, "Output directory");
  sim->add_option("--sigma", sim_opts.sigma, "Growth rate per node (or one value)")
      ->delimiter(',');
  sim->add_option("--omega", sim_opts.omega, "Frequency per node (or one value)")
      ->delimiter(',');
  sim->add_option("--sigma-range", sim_opts.sigma_range, "Random sigma lo,hi")
      ->delimiter(',')
      ->expected(2);
  sim->add_option("--omega-range", sim_opts.omega_range, "Random omega lo,hi")
      ->delimiter(',')
      ->expected(2);
  sim->add_option("--x0", sim_opts.x0, "Initial state (2 n values)")
      ->delimiter(',');
  sim->add_option("--t-end", sim_opts.t_end, "Trajectory length (s)");
  sim->add_option("--dt", sim_opts.dt, "Integration step");
  sim->add_option("--seed", sim_opts.seed, "Seed for random draws");
  sim->callback([&] {
    const WeightedGraph graph = load_graph(sim_opts.graph_path);
    const int n = graph.n_nodes();
    const SLParams params =
        resolve_params(n, sim_opts.sigma, sim_opts.omega, sim_opts.sigma_range,
                       sim_opts.omega_range, sim_opts.seed);
    Eigen::VectorXd x0;
    if (sim_opts.x0.empty()) {
      x0 = random_initial_state(2 * n, derive_seed(sim_opts.seed, kTagTrainIc));
    } else if (static_cast<int>(sim_opts.x0.size()) == 2 * n) {
      x0.resize(2 * n);
      for (int i = 0; i < 2 * n; ++i) x0(i) = sim_opts.x0[i];
    } else {
      throw std::invalid_argument("--x0 needs exactly 2*n_nodes values");
    }
    const Trajectory traj = simulate_sl(params, graph, x0, sim_opts.t_end,
                                        sim_opts.dt);
    std::filesystem::create_directories(sim_opts.out_dir);
    const auto dir = std::filesystem::path(sim_opts.out_dir);
    save_trajectory(traj, (dir / "trajectory.csv").string(),
                    (dir / "derivatives.csv").string());
    std::cout << "wrote " << (dir / "trajectory.csv").string() << " and "
              << (dir / "derivatives.csv").string() << " (" << traj.times.size()
              << " samples, " << 2 * n << " states)\n";
  });

  // ---- fit ----
  auto* fit = app.add_subcommand("fit", "Fit a sparse model to trajectory CSV");
  fit->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  std::string fit_config_path;
  fit->add_option("--config", fit_config_path, "Flat key=value config file");
  struct {
    std::string traj_path, derivs_path, graph_path, method = "sindy";
    std::string out_path = "model.json";
    SolverConfig solver;
    int degree = 3;
    int vars_per_node = 2;
  } fit_opts;
  fit->add_option("--traj", fit_opts.traj_path, "Trajectory CSV")->required();
  fit->add_option("--derivs", fit_opts.derivs_path,
                  "Derivative CSV (finite differences when omitted)");
  fit->add_option("--method", fit_opts.method, "sindy | sindyg")
      ->check(CLI::IsMember({"sindy", "sindyg"}));
  fit->add_option("--graph", fit_opts.graph_path, "Graph CSV (sindyg)");
  fit->add_option("--out", fit_opts.out_path, "Model JSON path");
  fit->add_option("--vars-per-node", fit_opts.vars_per_node,
                  "State variables per node");
  add_solver_flags(fit, fit_opts.solver, &fit_opts.degree);
  fit->callback([&] {
    if (fit_opts.method == "sindyg" && fit_opts.graph_path.empty()) {
      throw std::invalid_argument("--method sindyg requires --graph");
    }
    const Trajectory traj = load_trajectory(fit_opts.traj_path,
                                            fit_opts.derivs_path,
                                            fit_opts.vars_per_node);
    const Eigen::MatrixXd derivs =
        fit_opts.derivs_path.empty()
            ? finite_diff_derivs(traj.times, traj.states)
            : traj.derivs;
    const FeatureLibrary library = build_library(traj.svmap, fit_opts.degree);
    FitDiagnostics diag;
    CoefficientMatrix model;
    double seconds = 0.0;
    if (fit_opts.method == "sindyg") {
      const WeightedGraph graph = load_graph(fit_opts.graph_path);
      auto timed = timed_fit([&] {
        return fit_sindyg(library, graph, traj.states, derivs, fit_opts.solver,
                          &diag);
      });
      model = std::move(timed.first);
      seconds = timed.second;
    } else {
      auto timed = timed_fit([&] {
        return fit_sindy(library, traj.states, derivs, fit_opts.solver, &diag);
      });
      model = std::move(timed.first);
      seconds = timed.second;
    }
    for (const auto& w : diag.warnings) std::cerr << "warning: " << w << "\n";
    save_model(model, fit_opts.solver, fit_opts.method, fit_opts.out_path);
    const Eigen::MatrixXd predicted = predict_derivs(model, library, traj.states);
    std::cout << "wrote " << fit_opts.out_path << ": gamma=" << complexity(model)
              << " train_r2=" << r_squared(predicted, derivs)
              << " train_time_s=" << seconds << "\n";
  });

  // ---- score ----
  auto* score = app.add_subcommand("score", "Score a model against a trajectory");
  score->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  std::string score_config_path;
  score->add_option("--config", score_config_path, "Flat key=value config file");
  struct {
    std::string model_path, traj_path, derivs_path, truth_path;
    std::string out_path = "score.csv";
    std::string dataset_id = "dataset";
    std::string role = "train";
    int vars_per_node = 2;
  } score_opts;
  score->add_option("--model", score_opts.model_path, "Model JSON")->required();
  score->add_option("--traj", score_opts.traj_path, "Trajectory CSV")->required();
  score->add_option("--derivs", score_opts.derivs_path,
                    "Derivative CSV (finite differences when omitted)");
  score->add_option("--truth", score_opts.truth_path,
                    "True-model JSON for the coefficient error index");
  score->add_option("--out", score_opts.out_path, "Metrics CSV path");
  score->add_option("--dataset-id", score_opts.dataset_id, "Row label");
  score->add_option("--role", score_opts.role, "Report slot: train | test")
      ->check(CLI::IsMember({"train", "test"}));
  score->add_option("--vars-per-node", score_opts.vars_per_node,
                    "State variables per node");
  score->callback([&] {
    const LoadedModel loaded = load_model(score_opts.model_path);
    const FeatureLibrary library =
        library_for_model(loaded.model, score_opts.vars_per_node);
    const Trajectory traj = load_trajectory(score_opts.traj_path,
                                            score_opts.derivs_path,
                                            score_opts.vars_per_node);
    if (traj.states.cols() != static_cast<Eigen::Index>(loaded.model.var_names.size())) {
      throw FormatError("trajectory and model disagree on state dimension");
    }
    const Eigen::MatrixXd observed =
        score_opts.derivs_path.empty()
            ? finite_diff_derivs(traj.times, traj.states)
            : traj.derivs;
    const Eigen::MatrixXd predicted =
        predict_derivs(loaded.model, library, traj.states);

    MetricsReport report;
    report.dataset_id = score_opts.dataset_id;
    report.method = loaded.method;
    report.gamma = complexity(loaded.model);
    if (!score_opts.truth_path.empty()) {
      report.cei = cei(loaded.model, load_model(score_opts.truth_path).model);
    }
    const double r2 = r_squared(predicted, observed);
    const double m = mse(predicted, observed);
    if (score_opts.role == "test") {
      report.test_r2 = r2;
      report.test_mse = m;
    } else {
      report.train_r2 = r2;
      report.train_mse = m;
    }
    std::ofstream out(score_opts.out_path, std::ios::binary);
    if (!out) throw FormatError("cannot open " + score_opts.out_path);
    out << MetricsReport::csv_header() << "\n" << report.csv_row() << "\n";
    std::cout << MetricsReport::csv_header() << "\n" << report.csv_row() << "\n";
  });

  // ---- experiment ----
  auto* exp = app.add_subcommand("experiment", "Replication studies");
  exp->require_subcommand(1);

  CommonOpts simple_opts;
  auto* simple = exp->add_subcommand("simple", "Three-node case study");
  add_experiment_flags(simple, simple_opts);
  simple->callback([&] {
    apply_ranges(simple_opts);
    const SimpleCaseResult r = run_simple_case(simple_opts.config);
    std::cout << MetricsReport::csv_header() << "\n"
              << r.run.sindy.metrics.csv_row() << "\n"
              << r.run.sindyg.metrics.csv_row() << "\n"
              << "outputs in " << simple_opts.config.out_dir << "\n";
  });

  CommonOpts sweep_opts;
  SweepSpec sweep_spec;
  auto* sweep = exp->add_subcommand("sweep", "Sensitivity sweep");
  add_experiment_flags(sweep, sweep_opts);
  sweep->add_option("--param", sweep_spec.param,
                    "n_nodes | max_edge_weight | L | train_length")
      ->required()
      ->check(CLI::IsMember({"n_nodes", "max_edge_weight", "L", "train_length"}));
  sweep->add_option("--values", sweep_spec.values, "Swept values")
      ->required()
      ->delimiter(',');
  sweep->callback([&] {
    apply_ranges(sweep_opts);
    sweep_spec.reps = sweep_opts.config.reps;
    run_general_sweep(sweep_opts.config, sweep_spec);
    std::cout << "wrote " << sweep_opts.config.out_dir << "/sweep.csv\n";
  });

  CommonOpts table_opts;
  auto* table = exp->add_subcommand("table1", "ER/SF ensemble summary");
  add_experiment_flags(table, table_opts);
  table->callback([&] {
    apply_ranges(table_opts);
    run_table1(table_opts.config);
    std::cout << "wrote " << table_opts.config.out_dir << "/table1.csv and "
              << table_opts.config.out_dir << "/table1_runs.csv\n";
  });

  try {
    const std::vector<std::string> args = expand_config_args(argc, argv);
    std::vector<const char*> ptrs;
    ptrs.push_back(argv[0]);
    for (const auto& a : args) ptrs.push_back(a.c_str());
    app.parse(static_cast<int>(ptrs.size()), ptrs.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const sindyg::FormatError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const sindyg::DivergenceError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const sindyg::SolverError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
