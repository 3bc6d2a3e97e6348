#include "sindyg/regression.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "sindyg/errors.hpp"

namespace sindyg {

void SolverConfig::validate() const {
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");
  if (!(eta >= 0.0)) throw std::invalid_argument("eta must be >= 0");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  if (!(L >= 0.0)) throw std::invalid_argument("L must be >= 0");
  if (!(f_floor > 0.0 && f_floor < 0.5)) {
    throw std::invalid_argument("f_floor must lie in (0, 0.5)");
  }
}

PenaltyMatrix compute_penalty(const FeatureLibrary& library,
                              const WeightedGraph& graph,
                              const SolverConfig& config) {
  config.validate();
  if (library.svmap().n_nodes() != graph.n_nodes()) {
    throw std::invalid_argument("library state map and graph disagree on node count");
  }
  const Eigen::MatrixXd norm_adj = normalized_adjacency(graph);
  const int c = library.size();
  const int k = library.svmap().total();

  PenaltyMatrix penalty;
  penalty.f.resize(c, k);
  for (int j = 0; j < c; ++j) {
    const auto& term = library.term(j);
    if (term.source_vars.empty()) {
      penalty.f.row(j).setConstant(0.5);
      continue;
    }
    const double n_source_vars = static_cast<double>(term.source_vars.size());
    for (int i = 0; i < k; ++i) {
      const int sink_node = library.svmap().node_of(i);
      double m = 0.0;
      for (int s : term.source_nodes) m += norm_adj(s, sink_node);
      m /= static_cast<double>(term.source_nodes.size());
      const double f = 1.0 / (1.0 + std::exp((config.L / n_source_vars) * (m - 0.5)));
      penalty.f(j, i) = std::min(1.0, std::max(config.f_floor, f));
    }
  }
  return penalty;
}

namespace {

void warn(FitDiagnostics* diag, const std::string& msg) {
  if (diag != nullptr) diag->warnings.push_back(msg);
}

// Precomputed normal equations for one target column: gram = Theta^T Theta,
// rhs = Theta^T target. Iterating STLSQ against submatrices of these avoids
// re-forming the T-row products on every pass.
Eigen::VectorXd ridge_solve_gram(const Eigen::MatrixXd& gram,
                                 const Eigen::VectorXd& rhs, double lambda,
                                 const std::vector<int>& active) {
  const auto n_active = static_cast<Eigen::Index>(active.size());
  Eigen::MatrixXd g(n_active, n_active);
  Eigen::VectorXd b(n_active);
  for (Eigen::Index r = 0; r < n_active; ++r) {
    b(r) = rhs(active[r]);
    for (Eigen::Index s = 0; s < n_active; ++s) g(r, s) = gram(active[r], active[s]);
  }
  g.diagonal().array() += lambda;
  Eigen::LLT<Eigen::MatrixXd> llt(g);
  if (llt.info() != Eigen::Success) {
    throw SolverError("Cholesky factorization of the normal equations failed");
  }
  return llt.solve(b);
}

// Inner STLSQ loop for a single target column. theta is consulted only on
// the lambda == 0 path (rank-revealing QR); otherwise gram/rhs drive the
// iteration. Returns the coefficient vector in theta's column space.
Eigen::VectorXd stlsq_column(const Eigen::MatrixXd& theta,
                             const Eigen::VectorXd& target,
                             const Eigen::MatrixXd& gram,
                             const Eigen::VectorXd& rhs,
                             const SolverConfig& config, int column_index,
                             FitDiagnostics* diag) {
  const auto c = theta.cols();
  std::vector<int> active(c);
  for (Eigen::Index j = 0; j < c; ++j) active[j] = static_cast<int>(j);
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(c);

  for (int iter = 0; iter < config.max_iters; ++iter) {
    if (diag != nullptr) diag->iterations = iter + 1;
    if (theta.rows() < static_cast<Eigen::Index>(active.size())) {
      warn(diag, "fewer samples (" + std::to_string(theta.rows()) +
                     ") than active columns (" + std::to_string(active.size()) +
                     "); fit is underdetermined");
    }
    Eigen::VectorXd beta_a;
    if (config.lambda == 0.0) {
      std::vector<bool> mask(c, false);
      for (int j : active) mask[j] = true;
      beta = ridge_solve(theta, target, 0.0, mask, diag);
      beta_a.resize(active.size());
      for (std::size_t r = 0; r < active.size(); ++r) beta_a(r) = beta(active[r]);
    } else {
      beta_a = ridge_solve_gram(gram, rhs, config.lambda, active);
    }

    std::vector<int> next;
    next.reserve(active.size());
    beta.setZero();
    for (std::size_t r = 0; r < active.size(); ++r) {
      if (std::abs(beta_a(r)) >= config.eta) {
        next.push_back(active[r]);
        beta(active[r]) = beta_a(r);
      }
    }
    if (next.empty()) {
      warn(diag, "support collapsed to empty for equation " +
                     std::to_string(column_index) + "; returning zeros");
      return Eigen::VectorXd::Zero(c);
    }
    if (next.size() == active.size()) return beta;
    active = std::move(next);
  }
  return beta;
}

}  // namespace

Eigen::VectorXd ridge_solve(const Eigen::MatrixXd& theta,
                            const Eigen::VectorXd& target, double lambda,
                            const std::vector<bool>& support,
                            FitDiagnostics* diag) {
  if (theta.rows() != target.size()) {
    throw std::invalid_argument("theta and target row counts differ");
  }
  if (static_cast<Eigen::Index>(support.size()) != theta.cols()) {
    throw std::invalid_argument("support mask size does not match column count");
  }
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");

  std::vector<int> active;
  for (std::size_t j = 0; j < support.size(); ++j) {
    if (support[j]) active.push_back(static_cast<int>(j));
  }
  if (active.empty()) throw std::invalid_argument("support mask has no active column");

  const auto n_active = static_cast<Eigen::Index>(active.size());
  if (theta.rows() < n_active) {
    warn(diag, "fewer samples (" + std::to_string(theta.rows()) +
                   ") than active columns (" + std::to_string(n_active) +
                   "); fit is underdetermined");
  }

  Eigen::MatrixXd theta_a(theta.rows(), n_active);
  for (Eigen::Index j = 0; j < n_active; ++j) theta_a.col(j) = theta.col(active[j]);

  Eigen::VectorXd beta_a(n_active);
  if (lambda == 0.0) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(theta_a);
    if (qr.rank() < n_active) {
      throw SolverError(
          "singular least-squares system (collinear active columns); "
          "use lambda > 0");
    }
    beta_a = qr.solve(target);
  } else {
    Eigen::MatrixXd gram = theta_a.transpose() * theta_a;
    gram.diagonal().array() += lambda;
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success) {
      throw SolverError("Cholesky factorization of the normal equations failed");
    }
    beta_a = llt.solve(theta_a.transpose() * target);
  }

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(theta.cols());
  for (Eigen::Index j = 0; j < n_active; ++j) beta(active[j]) = beta_a(j);
  return beta;
}

Eigen::MatrixXd stlsq(const Eigen::MatrixXd& theta, const Eigen::MatrixXd& xdot,
                      const SolverConfig& config, FitDiagnostics* diag) {
  config.validate();
  if (theta.rows() != xdot.rows()) {
    throw std::invalid_argument("theta and xdot row counts differ");
  }
  const Eigen::MatrixXd gram = theta.transpose() * theta;
  const Eigen::MatrixXd rhs = theta.transpose() * xdot;
  Eigen::MatrixXd xi(theta.cols(), xdot.cols());
  for (Eigen::Index k = 0; k < xdot.cols(); ++k) {
    xi.col(k) = stlsq_column(theta, xdot.col(k), gram, rhs.col(k), config,
                             static_cast<int>(k), diag);
  }
  return xi;
}

Eigen::MatrixXd stlsq_graph(const Eigen::MatrixXd& theta,
                            const Eigen::MatrixXd& xdot,
                            const PenaltyMatrix& penalty,
                            const SolverConfig& config, FitDiagnostics* diag) {
  config.validate();
  if (theta.rows() != xdot.rows()) {
    throw std::invalid_argument("theta and xdot row counts differ");
  }
  if (penalty.f.rows() != theta.cols() || penalty.f.cols() != xdot.cols()) {
    throw std::invalid_argument("penalty shape does not match theta/xdot");
  }
  const Eigen::MatrixXd gram = theta.transpose() * theta;
  const Eigen::MatrixXd rhs = theta.transpose() * xdot;
  Eigen::MatrixXd xi(theta.cols(), xdot.cols());
  for (Eigen::Index i = 0; i < xdot.cols(); ++i) {
    const Eigen::VectorXd f_i =
        penalty.f.col(i).cwiseMax(config.f_floor).cwiseMin(1.0);
    const Eigen::VectorXd f_inv = f_i.cwiseInverse();
    const Eigen::MatrixXd gram_scaled =
        f_inv.asDiagonal() * gram * f_inv.asDiagonal();
    const Eigen::VectorXd rhs_scaled = f_inv.asDiagonal() * rhs.col(i);
    Eigen::MatrixXd theta_scaled;
    if (config.lambda == 0.0) theta_scaled = theta * f_inv.asDiagonal();
    const Eigen::VectorXd xi_scaled = stlsq_column(
        config.lambda == 0.0 ? theta_scaled : theta, xdot.col(i), gram_scaled,
        rhs_scaled, config, static_cast<int>(i), diag);
    xi.col(i) = xi_scaled.cwiseQuotient(f_i);
  }
  return xi;
}

namespace {

CoefficientMatrix assemble(const FeatureLibrary& library, Eigen::MatrixXd xi) {
  CoefficientMatrix model;
  model.xi = std::move(xi);
  model.term_names = library.term_names();
  model.var_names = library.svmap().var_names();
  return model;
}

}  // namespace

CoefficientMatrix fit_sindy(const FeatureLibrary& library,
                            const Eigen::MatrixXd& states,
                            const Eigen::MatrixXd& derivs,
                            const SolverConfig& config, FitDiagnostics* diag) {
  Eigen::MatrixXd theta = library.evaluate(states);
  if (config.normalize_columns) {
    auto [scaled, scales] = column_normalize(theta);
    Eigen::MatrixXd xi = stlsq(scaled, derivs, config, diag);
    xi.array().colwise() /= scales.array();
    return assemble(library, std::move(xi));
  }
  return assemble(library, stlsq(theta, derivs, config, diag));
}

CoefficientMatrix fit_sindyg(const FeatureLibrary& library,
                             const WeightedGraph& graph,
                             const Eigen::MatrixXd& states,
                             const Eigen::MatrixXd& derivs,
                             const SolverConfig& config, FitDiagnostics* diag) {
  const PenaltyMatrix penalty = compute_penalty(library, graph, config);
  Eigen::MatrixXd theta = library.evaluate(states);
  if (config.normalize_columns) {
    auto [scaled, scales] = column_normalize(theta);
    Eigen::MatrixXd xi = stlsq_graph(scaled, derivs, penalty, config, diag);
    xi.array().colwise() /= scales.array();
    return assemble(library, std::move(xi));
  }
  return assemble(library, stlsq_graph(theta, derivs, penalty, config, diag));
}

Eigen::MatrixXd predict_derivs(const CoefficientMatrix& model,
                               const FeatureLibrary& library,
                               const Eigen::MatrixXd& states) {
  if (model.xi.rows() != library.size()) {
    throw std::invalid_argument("model term count does not match library");
  }
  return library.evaluate(states) * model.xi;
}

Trajectory simulate_model(const CoefficientMatrix& model,
                          const FeatureLibrary& library,
                          const Eigen::VectorXd& x0, double t_end, double dt) {
  if (model.xi.rows() != library.size() ||
      model.xi.cols() != library.svmap().total()) {
    throw std::invalid_argument("model shape does not match library");
  }
  const auto rhs = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return model.xi.transpose() * library.evaluate_row(x);
  };
  return integrate_rk4(rhs, x0, t_end, dt, library.svmap());
}

void save_model(const CoefficientMatrix& model, const SolverConfig& config,
                const std::string& method, const std::string& path) {
  nlohmann::json j;
  j["var_names"] = model.var_names;
  j["term_names"] = model.term_names;
  auto rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < model.xi.rows(); ++r) {
    auto row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < model.xi.cols(); ++c) row.push_back(model.xi(r, c));
    rows.push_back(std::move(row));
  }
  j["xi"] = std::move(rows);
  j["config"] = {{"lambda", config.lambda},
                 {"eta", config.eta},
                 {"L", config.L},
                 {"max_iters", config.max_iters}};
  j["method"] = method;

  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open " + path + " for writing");
  out << j.dump(2) << "\n";
  if (!out) throw FormatError("write to " + path + " failed");
}

LoadedModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path + ": invalid JSON: " + e.what());
  }
  try {
    LoadedModel loaded;
    loaded.model.var_names = j.at("var_names").get<std::vector<std::string>>();
    loaded.model.term_names = j.at("term_names").get<std::vector<std::string>>();
    const auto& rows = j.at("xi");
    const auto c = static_cast<Eigen::Index>(loaded.model.term_names.size());
    const auto k = static_cast<Eigen::Index>(loaded.model.var_names.size());
    if (static_cast<Eigen::Index>(rows.size()) != c) {
      throw FormatError(path + ": xi row count does not match term_names");
    }
    loaded.model.xi.resize(c, k);
    for (Eigen::Index r = 0; r < c; ++r) {
      if (static_cast<Eigen::Index>(rows[r].size()) != k) {
        throw FormatError(path + ": xi row " + std::to_string(r) +
                          " length does not match var_names");
      }
      for (Eigen::Index col = 0; col < k; ++col) {
        loaded.model.xi(r, col) = rows[r][col].get<double>();
      }
    }
    loaded.config.lambda = j.at("config").at("lambda").get<double>();
    loaded.config.eta = j.at("config").at("eta").get<double>();
    loaded.config.L = j.at("config").at("L").get<double>();
    loaded.config.max_iters = j.at("config").at("max_iters").get<int>();
    loaded.method = j.at("method").get<std::string>();
    return loaded;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path + ": " + e.what());
  }
}

}  // namespace sindyg
