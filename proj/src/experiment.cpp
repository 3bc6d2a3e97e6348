#include "sindyg/experiment.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "sindyg/errors.hpp"
#include "sindyg/rng.hpp"
#include "io_util.hpp"

namespace sindyg {

namespace {

namespace tags {
constexpr std::uint64_t train_ic = 1;
constexpr std::uint64_t graph = 2;
constexpr std::uint64_t params = 3;
constexpr std::uint64_t test_ic_base = 100;
}  // namespace tags

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  return out;
}

Eigen::MatrixXd training_derivs(const Trajectory& traj, bool finite_diff) {
  return finite_diff ? finite_diff_derivs(traj.times, traj.states) : traj.derivs;
}

// Fit one method on prepared training data and score it. Test-side
// divergence marks the result failed instead of throwing.
MethodResult fit_and_score(const std::string& method,
                           const FeatureLibrary& library,
                           const WeightedGraph& graph, const SLParams& params,
                           const Eigen::MatrixXd& train_states,
                           const Eigen::MatrixXd& train_derivs,
                           const CoefficientMatrix& truth,
                           const std::vector<Eigen::VectorXd>& test_ics,
                           const ExperimentConfig& config,
                           const std::string& dataset_id,
                           std::vector<double>* per_test_r2 = nullptr) {
  MethodResult result;
  result.metrics.dataset_id = dataset_id;
  result.metrics.method = method;

  auto [model, seconds] = timed_fit([&] {
    return method == "sindyg"
               ? fit_sindyg(library, graph, train_states, train_derivs,
                            config.solver)
               : fit_sindy(library, train_states, train_derivs, config.solver);
  });
  result.model = std::move(model);
  result.metrics.train_time_s = seconds;
  result.metrics.gamma = complexity(result.model);
  result.metrics.cei = cei(result.model, truth);

  const Eigen::MatrixXd predicted =
      predict_derivs(result.model, library, train_states);
  result.metrics.train_r2 = r_squared(predicted, train_derivs);
  result.metrics.train_mse = mse(predicted, train_derivs);

  double r2_sum = 0.0;
  double mse_sum = 0.0;
  for (std::size_t i = 0; i < test_ics.size(); ++i) {
    try {
      const auto [r2, m] =
          test_trajectory_score(result.model, library, params, graph,
                                test_ics[i], config.test_t_end, config.dt);
      r2_sum += r2;
      mse_sum += m;
      if (per_test_r2 != nullptr) per_test_r2->push_back(r2);
    } catch (const DivergenceError& e) {
      result.failed = true;
      result.failure = std::string("test trajectory ") + std::to_string(i) +
                       ": " + e.what();
      return result;
    }
  }
  if (!test_ics.empty()) {
    result.metrics.test_r2 = r2_sum / static_cast<double>(test_ics.size());
    result.metrics.test_mse = mse_sum / static_cast<double>(test_ics.size());
  }
  return result;
}

struct Agg {
  double mean = std::numeric_limits<double>::quiet_NaN();
  double se = std::numeric_limits<double>::quiet_NaN();
  int n = 0;
};

Agg aggregate(const std::vector<double>& xs) {
  Agg a;
  a.n = static_cast<int>(xs.size());
  if (a.n == 0) return a;
  double sum = 0.0;
  for (double x : xs) sum += x;
  a.mean = sum / a.n;
  if (a.n >= 2) {
    double ss = 0.0;
    for (double x : xs) ss += (x - a.mean) * (x - a.mean);
    a.se = std::sqrt(ss / (a.n - 1)) / std::sqrt(static_cast<double>(a.n));
  }
  return a;
}

std::string na_or(double v) {
  return std::isnan(v) ? "n/a" : detail::fmt_double(v);
}

const std::vector<std::string> kRunColumns = {
    "gamma", "cei", "train_r2", "train_mse", "test_r2", "test_mse",
    "train_time_s"};

double metric_value(const MetricsReport& m, const std::string& name) {
  if (name == "gamma") return static_cast<double>(m.gamma);
  if (name == "cei") return m.cei;
  if (name == "train_r2") return m.train_r2;
  if (name == "train_mse") return m.train_mse;
  if (name == "test_r2") return m.test_r2;
  if (name == "test_mse") return m.test_mse;
  if (name == "train_time_s") return m.train_time_s;
  throw std::invalid_argument("unknown metric " + name);
}

void write_run_row(std::ofstream& out, const std::string& param,
                   const std::string& value, int rep, std::uint64_t seed,
                   const MethodResult& r) {
  out << "run," << param << "," << value << "," << rep << "," << seed << ","
      << r.metrics.method << "," << (r.failed ? "failed" : "ok");
  for (const auto& col : kRunColumns) {
    out << "," << (r.failed ? "n/a" : na_or(metric_value(r.metrics, col)));
  }
  out << ",n/a\n";
}

void write_agg_rows(std::ofstream& out, const std::string& param,
                    const std::string& value, const std::string& method,
                    const std::vector<MetricsReport>& ok_runs) {
  for (const char* which : {"mean", "se"}) {
    out << "agg," << param << "," << value << "," << which << ",n/a," << method
        << ",agg";
    int n_eff = 0;
    for (const auto& col : kRunColumns) {
      std::vector<double> xs;
      for (const auto& m : ok_runs) {
        const double v = metric_value(m, col);
        if (!std::isnan(v)) xs.push_back(v);
      }
      const Agg a = aggregate(xs);
      n_eff = a.n;
      out << "," << na_or(std::string(which) == "mean" ? a.mean : a.se);
    }
    out << "," << n_eff << "\n";
  }
}

}  // namespace

Eigen::VectorXd random_initial_state(int k_total, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::VectorXd x0(k_total);
  for (int i = 0; i < k_total; ++i) x0(i) = rng.uniform(-1.0, 1.0);
  return x0;
}

std::pair<double, double> test_trajectory_score(
    const CoefficientMatrix& model, const FeatureLibrary& library,
    const SLParams& params, const WeightedGraph& graph,
    const Eigen::VectorXd& x0, double t_end, double dt) {
  const Trajectory truth = simulate_sl(params, graph, x0, t_end, dt);
  const Trajectory predicted = simulate_model(model, library, x0, t_end, dt);
  return {r_squared(predicted.derivs, truth.derivs),
          mse(predicted.derivs, truth.derivs)};
}

SimpleCaseResult run_simple_case(const ExperimentConfig& config) {
  config.solver.validate();
  const std::filesystem::path out_dir(config.out_dir);
  std::filesystem::create_directories(out_dir);

  // Three nodes, nodes 1 and 2 mutually coupled, node 0 isolated.
  Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(3, 3);
  adj(1, 2) = config.simple_coupling;
  adj(2, 1) = config.simple_coupling;
  const WeightedGraph graph(adj, /*directed=*/false);

  SLParams params;
  params.sigma = Eigen::Vector3d::Constant(0.2);
  params.omega.resize(3);
  params.omega << std::numbers::pi / 2.0, std::numbers::pi,
      8.0 * std::numbers::pi;

  const StateVariableMap svmap(3, 2);
  const FeatureLibrary library = build_library(svmap, config.degree);

  const Eigen::VectorXd x0 =
      random_initial_state(svmap.total(), derive_seed(config.seed, tags::train_ic));
  const Trajectory train = simulate_sl(params, graph, x0, config.t_end, config.dt);
  const Eigen::MatrixXd train_derivs = training_derivs(train, config.finite_diff);

  std::vector<Eigen::VectorXd> test_ics;
  for (int i = 0; i < config.n_test; ++i) {
    test_ics.push_back(random_initial_state(
        svmap.total(), derive_seed(config.seed, tags::test_ic_base + i)));
  }

  SimpleCaseResult result;
  result.truth = true_coefficients(params, graph, library);
  result.run.sindy = fit_and_score("sindy", library, graph, params,
                                   train.states, train_derivs, result.truth,
                                   test_ics, config, "simple",
                                   &result.sindy_test_r2);
  result.run.sindyg = fit_and_score("sindyg", library, graph, params,
                                    train.states, train_derivs, result.truth,
                                    test_ics, config, "simple",
                                    &result.sindyg_test_r2);

  // Artifacts.
  save_graph(graph, (out_dir / "simple_graph.csv").string());
  save_trajectory(train, (out_dir / "train_trajectory.csv").string(),
                  (out_dir / "train_derivatives.csv").string());
  save_model(result.truth, config.solver, "true",
             (out_dir / "model_true.json").string());
  save_model(result.run.sindy.model, config.solver, "sindy",
             (out_dir / "model_sindy.json").string());
  save_model(result.run.sindyg.model, config.solver, "sindyg",
             (out_dir / "model_sindyg.json").string());

  {
    auto out = open_out(out_dir / "heatmap.csv");
    out << "term,model";
    for (const auto& v : result.truth.var_names) out << "," << v;
    out << "\n";
    const auto dump = [&](const std::string& label, const Eigen::MatrixXd& xi) {
      for (int j = 0; j < library.size(); ++j) {
        out << library.term(j).name << "," << label;
        for (Eigen::Index k = 0; k < xi.cols(); ++k) {
          out << "," << detail::fmt_double(xi(j, k));
        }
        out << "\n";
      }
    };
    dump("true", result.truth.xi);
    dump("sindy", result.run.sindy.model.xi);
    dump("sindyg", result.run.sindyg.model.xi);
  }

  {
    auto out = open_out(out_dir / "metrics.csv");
    out << MetricsReport::csv_header() << "\n";
    out << result.run.sindy.metrics.csv_row() << "\n";
    out << result.run.sindyg.metrics.csv_row() << "\n";
  }

  if (!test_ics.empty()) {
    // Trajectory comparison on the first unseen initial condition.
    const Trajectory truth_traj =
        simulate_sl(params, graph, test_ics[0], config.test_t_end, config.dt);
    auto write_cols = [&](std::ofstream& out, const std::string& label) {
      for (const auto& v : result.truth.var_names) out << "," << label << "_" << v;
    };
    auto out = open_out(out_dir / "trajectory_comparison.csv");
    bool have_sindy = true, have_sindyg = true;
    Trajectory sindy_traj, sindyg_traj;
    try {
      sindy_traj = simulate_model(result.run.sindy.model, library, test_ics[0],
                                  config.test_t_end, config.dt);
    } catch (const DivergenceError&) {
      have_sindy = false;
    }
    try {
      sindyg_traj = simulate_model(result.run.sindyg.model, library,
                                   test_ics[0], config.test_t_end, config.dt);
    } catch (const DivergenceError&) {
      have_sindyg = false;
    }
    out << "t";
    write_cols(out, "true");
    if (have_sindy) write_cols(out, "sindy");
    if (have_sindyg) write_cols(out, "sindyg");
    out << "\n";
    for (Eigen::Index i = 0; i < truth_traj.times.size(); ++i) {
      out << detail::fmt_double(truth_traj.times(i));
      for (Eigen::Index k = 0; k < truth_traj.states.cols(); ++k) {
        out << "," << detail::fmt_double(truth_traj.states(i, k));
      }
      if (have_sindy) {
        for (Eigen::Index k = 0; k < sindy_traj.states.cols(); ++k) {
          out << "," << detail::fmt_double(sindy_traj.states(i, k));
        }
      }
      if (have_sindyg) {
        for (Eigen::Index k = 0; k < sindyg_traj.states.cols(); ++k) {
          out << "," << detail::fmt_double(sindyg_traj.states(i, k));
        }
      }
      out << "\n";
    }
  }
  return result;
}

RunResult run_general_rep(const ExperimentConfig& config, std::uint64_t rep_seed,
                          const std::string& dataset_id) {
  const WeightedGraph graph =
      config.graph_type == "sf"
          ? generate_sf(config.n_nodes, config.m_attach, config.w_min,
                        config.w_max, derive_seed(rep_seed, tags::graph))
          : generate_er(config.n_nodes, config.edge_prob, config.w_min,
                        config.w_max, derive_seed(rep_seed, tags::graph));
  const SLParams params = sample_random_params(
      config.n_nodes, {config.sigma_min, config.sigma_max},
      {config.omega_min, config.omega_max}, derive_seed(rep_seed, tags::params));

  const StateVariableMap svmap(config.n_nodes, 2);
  const FeatureLibrary library = build_library(svmap, config.degree);
  const CoefficientMatrix truth = true_coefficients(params, graph, library);

  std::vector<Eigen::VectorXd> test_ics;
  for (int i = 0; i < config.n_test; ++i) {
    test_ics.push_back(random_initial_state(
        svmap.total(), derive_seed(rep_seed, tags::test_ic_base + i)));
  }

  RunResult result;
  try {
    const Eigen::VectorXd x0 = random_initial_state(
        svmap.total(), derive_seed(rep_seed, tags::train_ic));
    const Trajectory train =
        simulate_sl(params, graph, x0, config.t_end, config.dt);
    const Eigen::MatrixXd train_derivs =
        training_derivs(train, config.finite_diff);

    result.sindy =
        fit_and_score("sindy", library, graph, params, train.states,
                      train_derivs, truth, test_ics, config, dataset_id);
    result.sindyg =
        fit_and_score("sindyg", library, graph, params, train.states,
                      train_derivs, truth, test_ics, config, dataset_id);
  } catch (const DivergenceError& e) {
    // Training data itself diverged: both methods fail for this repetition.
    result.sindy.failed = result.sindyg.failed = true;
    result.sindy.failure = result.sindyg.failure = e.what();
    result.sindy.metrics.dataset_id = result.sindyg.metrics.dataset_id = dataset_id;
    result.sindy.metrics.method = "sindy";
    result.sindyg.metrics.method = "sindyg";
  }
  return result;
}

void run_general_sweep(const ExperimentConfig& config, const SweepSpec& sweep) {
  static const std::vector<std::string> kParams = {"n_nodes", "max_edge_weight",
                                                   "L", "train_length"};
  bool known = false;
  for (const auto& p : kParams) known = known || p == sweep.param;
  if (!known) throw std::invalid_argument("unknown sweep parameter: " + sweep.param);
  if (sweep.values.empty()) throw std::invalid_argument("sweep needs at least one value");
  if (sweep.reps < 1) throw std::invalid_argument("sweep needs at least one repetition");

  const std::filesystem::path out_dir(config.out_dir);
  std::filesystem::create_directories(out_dir);
  auto out = open_out(out_dir / "sweep.csv");
  out << "row_type,param,value,rep,seed,method,status,gamma,cei,train_r2,"
         "train_mse,test_r2,test_mse,train_time_s,n_effective\n";

  for (std::size_t vi = 0; vi < sweep.values.size(); ++vi) {
    const double value = sweep.values[vi];
    ExperimentConfig cfg = config;
    if (sweep.param == "n_nodes") {
      cfg.n_nodes = static_cast<int>(value);
      if (cfg.n_nodes < 1) throw std::invalid_argument("n_nodes value must be >= 1");
    } else if (sweep.param == "max_edge_weight") {
      if (!(value > 0.0)) throw std::invalid_argument("max_edge_weight must be > 0");
      cfg.w_max = value;
      cfg.w_min = std::min(cfg.w_min, value);
    } else if (sweep.param == "L") {
      if (!(value >= 0.0)) throw std::invalid_argument("L must be >= 0");
      cfg.solver.L = value;
    } else {
      if (!(value > 0.0)) throw std::invalid_argument("train_length must be > 0");
      cfg.t_end = value;
    }

    const std::string value_str = detail::fmt_double(value);
    std::vector<MetricsReport> ok_sindy, ok_sindyg;
    for (int rep = 0; rep < sweep.reps; ++rep) {
      const std::uint64_t rep_seed =
          derive_seed(derive_seed(config.seed, 1000 + vi), rep);
      const std::string id = sweep.param + "=" + value_str + ":r" + std::to_string(rep);
      const RunResult run = run_general_rep(cfg, rep_seed, id);
      write_run_row(out, sweep.param, value_str, rep, rep_seed, run.sindy);
      write_run_row(out, sweep.param, value_str, rep, rep_seed, run.sindyg);
      if (!run.sindy.failed) ok_sindy.push_back(run.sindy.metrics);
      if (!run.sindyg.failed) ok_sindyg.push_back(run.sindyg.metrics);
    }
    write_agg_rows(out, sweep.param, value_str, "sindy", ok_sindy);
    write_agg_rows(out, sweep.param, value_str, "sindyg", ok_sindyg);
  }
}

Table1Result run_table1(const ExperimentConfig& config) {
  if (config.reps < 1) throw std::invalid_argument("reps must be >= 1");
  const std::filesystem::path out_dir(config.out_dir);
  std::filesystem::create_directories(out_dir);

  Table1Result table;
  auto runs_out = open_out(out_dir / "table1_runs.csv");
  runs_out << "row_type,param,value,rep,seed,method,status,gamma,cei,train_r2,"
              "train_mse,test_r2,test_mse,train_time_s,n_effective\n";

  const std::vector<std::string> types = {"er", "sf"};
  for (std::size_t ti = 0; ti < types.size(); ++ti) {
    ExperimentConfig cfg = config;
    cfg.graph_type = types[ti];
    EnsembleCell& sindy_cell = (ti == 0) ? table.er_sindy : table.sf_sindy;
    EnsembleCell& sindyg_cell = (ti == 0) ? table.er_sindyg : table.sf_sindyg;
    std::vector<MetricsReport> ok_sindy, ok_sindyg;
    for (int rep = 0; rep < config.reps; ++rep) {
      const std::uint64_t rep_seed =
          derive_seed(derive_seed(config.seed, 2000 + ti), rep);
      const std::string id = types[ti] + ":r" + std::to_string(rep);
      const RunResult run = run_general_rep(cfg, rep_seed, id);
      write_run_row(runs_out, "graph_type", types[ti], rep, rep_seed, run.sindy);
      write_run_row(runs_out, "graph_type", types[ti], rep, rep_seed, run.sindyg);
      if (run.sindy.failed) {
        ++sindy_cell.n_failed;
      } else {
        sindy_cell.runs.push_back(run.sindy.metrics);
        ok_sindy.push_back(run.sindy.metrics);
      }
      if (run.sindyg.failed) {
        ++sindyg_cell.n_failed;
      } else {
        sindyg_cell.runs.push_back(run.sindyg.metrics);
        ok_sindyg.push_back(run.sindyg.metrics);
      }
    }
    write_agg_rows(runs_out, "graph_type", types[ti], "sindy", ok_sindy);
    write_agg_rows(runs_out, "graph_type", types[ti], "sindyg", ok_sindyg);
  }

  auto out = open_out(out_dir / "table1.csv");
  out << "metric,er_sindy_mean,er_sindy_se,er_sindyg_mean,er_sindyg_se,"
         "sf_sindy_mean,sf_sindy_se,sf_sindyg_mean,sf_sindyg_se,"
         "er_sindy_n,er_sindyg_n,sf_sindy_n,sf_sindyg_n\n";
  const std::vector<std::string> metric_names = {
      "gamma", "cei", "train_time_s", "train_r2", "train_mse", "test_r2",
      "test_mse"};
  for (const auto& name : metric_names) {
    auto cell_agg = [&](const EnsembleCell& cell) {
      std::vector<double> xs;
      for (const auto& m : cell.runs) {
        const double v = metric_value(m, name);
        if (!std::isnan(v)) xs.push_back(v);
      }
      return aggregate(xs);
    };
    const Agg es = cell_agg(table.er_sindy);
    const Agg eg = cell_agg(table.er_sindyg);
    const Agg ss = cell_agg(table.sf_sindy);
    const Agg sg = cell_agg(table.sf_sindyg);
    out << name << "," << na_or(es.mean) << "," << na_or(es.se) << ","
        << na_or(eg.mean) << "," << na_or(eg.se) << "," << na_or(ss.mean)
        << "," << na_or(ss.se) << "," << na_or(sg.mean) << "," << na_or(sg.se)
        << "," << es.n << "," << eg.n << "," << ss.n << "," << sg.n << "\n";
  }
  return table;
}

}  // namespace sindyg
