#include "sindyg/oscillator.hpp"

#include <stdexcept>
#include <string>

#include "sindyg/rng.hpp"

namespace sindyg {

Eigen::VectorXd sl_rhs(const Eigen::VectorXd& state, const SLParams& params,
                       const WeightedGraph& graph) {
  const int n = graph.n_nodes();
  if (params.n_nodes() != n || params.omega.size() != n) {
    throw std::invalid_argument("params do not match graph node count");
  }
  if (state.size() != 2 * n) {
    throw std::invalid_argument("state size must be 2 * n_nodes");
  }
  const auto& a = graph.adjacency();
  Eigen::VectorXd out(2 * n);
  for (int node = 0; node < n; ++node) {
    const double x = state(2 * node);
    const double y = state(2 * node + 1);
    const double r2 = x * x + y * y;
    double dx = params.sigma(node) * x - params.omega(node) * y - r2 * x;
    double dy = params.omega(node) * x + params.sigma(node) * y - r2 * y;
    for (int m = 0; m < n; ++m) {
      const double k = a(m, node);
      if (k == 0.0) continue;
      const double xm = state(2 * m);
      const double ym = state(2 * m + 1);
      dx += k * (x * xm - y * ym);
      dy += k * (x * ym + y * xm);
    }
    out(2 * node) = dx;
    out(2 * node + 1) = dy;
  }
  return out;
}

Trajectory simulate_sl(const SLParams& params, const WeightedGraph& graph,
                       const Eigen::VectorXd& x0, double t_end, double dt) {
  const StateVariableMap svmap(graph.n_nodes(), 2);
  const auto rhs = [&](const Eigen::VectorXd& x) { return sl_rhs(x, params, graph); };
  return integrate_rk4(rhs, x0, t_end, dt, svmap);
}

namespace {

void set_coef(Eigen::MatrixXd& xi, const FeatureLibrary& library,
              const Eigen::VectorXi& exponents, int equation, double value) {
  const int j = library.index_of(exponents);
  if (j < 0) {
    throw std::invalid_argument(
        "library cannot represent the model: missing a degree-" +
        std::to_string(exponents.sum()) + " term");
  }
  xi(j, equation) += value;
}

}  // namespace

CoefficientMatrix true_coefficients(const SLParams& params,
                                    const WeightedGraph& graph,
                                    const FeatureLibrary& library) {
  const int n = graph.n_nodes();
  if (params.n_nodes() != n || params.omega.size() != n) {
    throw std::invalid_argument("params do not match graph node count");
  }
  if (library.svmap().n_nodes() != n || library.svmap().vars_per_node() != 2) {
    throw std::invalid_argument("library state map does not match the network");
  }
  const int k_total = library.svmap().total();
  Eigen::MatrixXd xi = Eigen::MatrixXd::Zero(library.size(), k_total);
  const auto& a = graph.adjacency();

  auto mono = [k_total](std::initializer_list<std::pair<int, int>> factors) {
    Eigen::VectorXi e = Eigen::VectorXi::Zero(k_total);
    for (const auto& [var, power] : factors) e(var) += power;
    return e;
  };

  for (int node = 0; node < n; ++node) {
    const int xv = 2 * node;
    const int yv = 2 * node + 1;
    const int eq_x = xv;
    const int eq_y = yv;
    const double sigma = params.sigma(node);
    const double omega = params.omega(node);

    set_coef(xi, library, mono({{xv, 1}}), eq_x, sigma);
    set_coef(xi, library, mono({{yv, 1}}), eq_x, -omega);
    set_coef(xi, library, mono({{xv, 3}}), eq_x, -1.0);
    set_coef(xi, library, mono({{xv, 1}, {yv, 2}}), eq_x, -1.0);

    set_coef(xi, library, mono({{xv, 1}}), eq_y, omega);
    set_coef(xi, library, mono({{yv, 1}}), eq_y, sigma);
    set_coef(xi, library, mono({{xv, 2}, {yv, 1}}), eq_y, -1.0);
    set_coef(xi, library, mono({{yv, 3}}), eq_y, -1.0);

    for (int m = 0; m < n; ++m) {
      const double k = a(m, node);
      if (k == 0.0) continue;
      const int xm = 2 * m;
      const int ym = 2 * m + 1;
      set_coef(xi, library, mono({{xv, 1}, {xm, 1}}), eq_x, k);
      set_coef(xi, library, mono({{yv, 1}, {ym, 1}}), eq_x, -k);
      set_coef(xi, library, mono({{xv, 1}, {ym, 1}}), eq_y, k);
      set_coef(xi, library, mono({{yv, 1}, {xm, 1}}), eq_y, k);
    }
  }

  CoefficientMatrix model;
  model.xi = std::move(xi);
  model.term_names = library.term_names();
  model.var_names = library.svmap().var_names();
  return model;
}

SLParams sample_random_params(int n_nodes,
                              std::pair<double, double> sigma_range,
                              std::pair<double, double> omega_range,
                              std::uint64_t seed) {
  if (n_nodes < 1) throw std::invalid_argument("n_nodes must be >= 1");
  if (!(sigma_range.first <= sigma_range.second) ||
      !(omega_range.first <= omega_range.second)) {
    throw std::invalid_argument("parameter ranges must satisfy lo <= hi");
  }
  Rng rng(seed);
  SLParams params;
  params.sigma.resize(n_nodes);
  params.omega.resize(n_nodes);
  for (int i = 0; i < n_nodes; ++i) {
    params.sigma(i) = rng.uniform(sigma_range.first, sigma_range.second);
  }
  for (int i = 0; i < n_nodes; ++i) {
    params.omega(i) = rng.uniform(omega_range.first, omega_range.second);
  }
  return params;
}

}  // namespace sindyg
