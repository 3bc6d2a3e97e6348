#include "sindyg/library.hpp"

#include <stdexcept>

namespace sindyg {

namespace {

// Enumerate exponent vectors of total degree d, assigning the leading
// variable the largest share first. This realizes the within-degree order
// x0^d, x0^{d-1} x1, ..., x_{K-1}^d.
void enumerate_degree(int var, int remaining, Eigen::VectorXi& current,
                      std::vector<Eigen::VectorXi>& out) {
  const int k = static_cast<int>(current.size());
  if (var == k - 1) {
    current(var) = remaining;
    out.push_back(current);
    current(var) = 0;
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    current(var) = e;
    enumerate_degree(var + 1, remaining - e, current, out);
  }
  current(var) = 0;
}

std::string make_name(const Eigen::VectorXi& exponents,
                      const StateVariableMap& svmap) {
  std::string name;
  for (int v = 0; v < exponents.size(); ++v) {
    if (exponents(v) == 0) continue;
    if (!name.empty()) name += " ";
    name += svmap.var_name(v);
    if (exponents(v) > 1) name += "^" + std::to_string(exponents(v));
  }
  return name.empty() ? "1" : name;
}

}  // namespace

FeatureLibrary::FeatureLibrary(StateVariableMap svmap, int max_degree)
    : svmap_(svmap), max_degree_(max_degree) {
  if (max_degree < 1) throw std::invalid_argument("max_degree must be >= 1");
  const int k = svmap_.total();

  std::vector<Eigen::VectorXi> exps;
  Eigen::VectorXi current = Eigen::VectorXi::Zero(k);
  for (int d = 0; d <= max_degree; ++d) enumerate_degree(0, d, current, exps);

  terms_.reserve(exps.size());
  for (const auto& e : exps) {
    TermDescriptor term;
    term.exponents = e;
    term.name = make_name(e, svmap_);
    for (int v = 0; v < k; ++v) {
      if (e(v) > 0) {
        term.source_vars.push_back(v);
        const int node = svmap_.node_of(v);
        if (term.source_nodes.empty() || term.source_nodes.back() != node) {
          term.source_nodes.push_back(node);
        }
      }
    }
    index_[std::vector<int>(e.data(), e.data() + k)] =
        static_cast<int>(terms_.size());
    terms_.push_back(std::move(term));
  }
}

std::vector<std::string> FeatureLibrary::term_names() const {
  std::vector<std::string> names(terms_.size());
  for (std::size_t j = 0; j < terms_.size(); ++j) names[j] = terms_[j].name;
  return names;
}

int FeatureLibrary::index_of(const Eigen::VectorXi& exponents) const {
  std::vector<int> key(exponents.data(), exponents.data() + exponents.size());
  auto it = index_.find(key);
  return it == index_.end() ? -1 : it->second;
}

Eigen::MatrixXd FeatureLibrary::evaluate(const Eigen::MatrixXd& states) const {
  if (states.cols() != svmap_.total()) {
    throw std::invalid_argument("states column count does not match state map");
  }
  const auto t = states.rows();
  Eigen::MatrixXd theta(t, size());
  for (int j = 0; j < size(); ++j) {
    Eigen::VectorXd col = Eigen::VectorXd::Ones(t);
    const auto& e = terms_[j].exponents;
    for (int v = 0; v < e.size(); ++v) {
      for (int p = 0; p < e(v); ++p) col.array() *= states.col(v).array();
    }
    theta.col(j) = col;
  }
  return theta;
}

Eigen::VectorXd FeatureLibrary::evaluate_row(const Eigen::VectorXd& state) const {
  if (state.size() != svmap_.total()) {
    throw std::invalid_argument("state size does not match state map");
  }
  Eigen::VectorXd row(size());
  for (int j = 0; j < size(); ++j) {
    double v = 1.0;
    const auto& e = terms_[j].exponents;
    for (int s = 0; s < e.size(); ++s) {
      for (int p = 0; p < e(s); ++p) v *= state(s);
    }
    row(j) = v;
  }
  return row;
}

FeatureLibrary build_library(const StateVariableMap& svmap, int max_degree) {
  return FeatureLibrary(svmap, max_degree);
}

std::pair<Eigen::MatrixXd, Eigen::VectorXd> column_normalize(
    const Eigen::MatrixXd& theta) {
  Eigen::MatrixXd scaled = theta;
  Eigen::VectorXd scales = Eigen::VectorXd::Ones(theta.cols());
  for (Eigen::Index j = 0; j < theta.cols(); ++j) {
    const double norm = theta.col(j).norm();
    if (norm > 0.0) {
      scales(j) = norm;
      scaled.col(j) /= norm;
    }
  }
  return {std::move(scaled), std::move(scales)};
}

}  // namespace sindyg
