#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sindyg/errors.hpp"
#include "sindyg/experiment.hpp"
#include "sindyg/graph.hpp"
#include "sindyg/library.hpp"
#include "sindyg/metrics.hpp"
#include "sindyg/oscillator.hpp"
#include "sindyg/regression.hpp"
#include "sindyg/rng.hpp"
#include "sindyg/trajectory.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace sindyg;

PYBIND11_MODULE(_sindyg, m) {
  m.doc() = "Sparse identification of graph-structured dynamics";

  py::register_exception<FormatError>(m, "FormatError");
  py::register_exception<DivergenceError>(m, "DivergenceError");
  py::register_exception<SolverError>(m, "SolverError");

  py::class_<WeightedGraph>(m, "WeightedGraph")
      .def(py::init<Eigen::MatrixXd, bool>(), "adjacency"_a, "directed"_a = false)
      .def_property_readonly("n_nodes", &WeightedGraph::n_nodes)
      .def_property_readonly("adjacency", &WeightedGraph::adjacency)
      .def_property_readonly("directed", &WeightedGraph::directed)
      .def("edge_count", &WeightedGraph::edge_count)
      .def("degrees", &WeightedGraph::degrees);

  py::class_<StateVariableMap>(m, "StateVariableMap")
      .def(py::init<int, int>(), "n_nodes"_a, "vars_per_node"_a = 2)
      .def_property_readonly("n_nodes", &StateVariableMap::n_nodes)
      .def_property_readonly("vars_per_node", &StateVariableMap::vars_per_node)
      .def_property_readonly("total", &StateVariableMap::total)
      .def("node_of", &StateVariableMap::node_of)
      .def("state_indices_of", &StateVariableMap::state_indices_of)
      .def("var_names", &StateVariableMap::var_names);

  m.def("generate_er", &generate_er, "n_nodes"_a, "edge_prob"_a, "w_min"_a,
        "w_max"_a, "seed"_a);
  m.def("generate_sf", &generate_sf, "n_nodes"_a, "m_attach"_a, "w_min"_a,
        "w_max"_a, "seed"_a);
  m.def("normalized_adjacency", &normalized_adjacency, "graph"_a);
  m.def("load_graph", &load_graph, "path"_a);
  m.def("save_graph", &save_graph, "graph"_a, "path"_a);

  py::class_<SLParams>(m, "SLParams")
      .def(py::init([](Eigen::VectorXd sigma, Eigen::VectorXd omega) {
             SLParams p;
             p.sigma = std::move(sigma);
             p.omega = std::move(omega);
             return p;
           }),
           "sigma"_a, "omega"_a)
      .def_readwrite("sigma", &SLParams::sigma)
      .def_readwrite("omega", &SLParams::omega);

  m.def("sl_rhs", &sl_rhs, "state"_a, "params"_a, "graph"_a);
  m.def("sample_random_params", &sample_random_params, "n_nodes"_a,
        "sigma_range"_a, "omega_range"_a, "seed"_a);
  m.def("random_initial_state", &random_initial_state, "k_total"_a, "seed"_a);
  m.def("derive_seed", &derive_seed, "base"_a, "tag"_a);

  py::class_<Trajectory>(m, "Trajectory")
      .def_readonly("times", &Trajectory::times)
      .def_readonly("states", &Trajectory::states)
      .def_readonly("derivs", &Trajectory::derivs)
      .def_readonly("svmap", &Trajectory::svmap);

  m.def("simulate_sl", &simulate_sl, "params"_a, "graph"_a, "x0"_a, "t_end"_a,
        "dt"_a);
  m.def("finite_diff_derivs", &finite_diff_derivs, "times"_a, "states"_a);

  py::class_<FeatureLibrary>(m, "FeatureLibrary")
      .def_property_readonly("size", &FeatureLibrary::size)
      .def_property_readonly("max_degree", &FeatureLibrary::max_degree)
      .def_property_readonly("svmap", &FeatureLibrary::svmap)
      .def("term_names", &FeatureLibrary::term_names)
      .def("evaluate", &FeatureLibrary::evaluate, "states"_a);

  m.def("build_library", &build_library, "svmap"_a, "max_degree"_a);
  m.def(
      "evaluate_library",
      [](const FeatureLibrary& lib, const Eigen::MatrixXd& states) {
        return lib.evaluate(states);
      },
      "library"_a, "states"_a);
  m.def("column_normalize", &column_normalize, "theta"_a);

  py::class_<SolverConfig>(m, "SolverConfig")
      .def(py::init<>())
      .def_readwrite("lambda_", &SolverConfig::lambda)
      .def_readwrite("eta", &SolverConfig::eta)
      .def_readwrite("max_iters", &SolverConfig::max_iters)
      .def_readwrite("L", &SolverConfig::L)
      .def_readwrite("f_floor", &SolverConfig::f_floor)
      .def_readwrite("normalize_columns", &SolverConfig::normalize_columns);

  py::class_<PenaltyMatrix>(m, "PenaltyMatrix")
      .def_readonly("f", &PenaltyMatrix::f);

  py::class_<CoefficientMatrix>(m, "CoefficientMatrix")
      .def_readonly("xi", &CoefficientMatrix::xi)
      .def_readonly("term_names", &CoefficientMatrix::term_names)
      .def_readonly("var_names", &CoefficientMatrix::var_names);

  m.def("compute_penalty", &compute_penalty, "library"_a, "graph"_a, "config"_a);
  m.def(
      "stlsq",
      [](const Eigen::MatrixXd& theta, const Eigen::MatrixXd& xdot,
         const SolverConfig& config) { return stlsq(theta, xdot, config); },
      "theta"_a, "xdot"_a, "config"_a);
  m.def(
      "stlsq_graph",
      [](const Eigen::MatrixXd& theta, const Eigen::MatrixXd& xdot,
         const PenaltyMatrix& penalty, const SolverConfig& config) {
        return stlsq_graph(theta, xdot, penalty, config);
      },
      "theta"_a, "xdot"_a, "penalty"_a, "config"_a);
  m.def(
      "fit_sindy",
      [](const FeatureLibrary& lib, const Eigen::MatrixXd& states,
         const Eigen::MatrixXd& derivs, const SolverConfig& config) {
        return fit_sindy(lib, states, derivs, config);
      },
      "library"_a, "states"_a, "derivs"_a, "config"_a);
  m.def(
      "fit_sindyg",
      [](const FeatureLibrary& lib, const WeightedGraph& graph,
         const Eigen::MatrixXd& states, const Eigen::MatrixXd& derivs,
         const SolverConfig& config) {
        return fit_sindyg(lib, graph, states, derivs, config);
      },
      "library"_a, "graph"_a, "states"_a, "derivs"_a, "config"_a);
  m.def("predict_derivs", &predict_derivs, "model"_a, "library"_a, "states"_a);
  m.def("simulate_model", &simulate_model, "model"_a, "library"_a, "x0"_a,
        "t_end"_a, "dt"_a);
  m.def("true_coefficients", &true_coefficients, "params"_a, "graph"_a,
        "library"_a);
  m.def("save_model", &save_model, "model"_a, "config"_a, "method"_a, "path"_a);
  m.def(
      "load_model",
      [](const std::string& path) {
        LoadedModel loaded = load_model(path);
        return py::make_tuple(loaded.model, loaded.config, loaded.method);
      },
      "path"_a);

  m.def(
      "complexity",
      [](const CoefficientMatrix& model, double tol) {
        return complexity(model, tol);
      },
      "model"_a, "tol"_a = 0.0);
  m.def("cei", &cei, "predicted"_a, "truth"_a);
  m.def("r_squared", &r_squared, "predicted"_a, "observed"_a);
  m.def("mse", &mse, "predicted"_a, "observed"_a);
}
