#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "sindyg/graph.hpp"

namespace sindyg {

// One monomial candidate function x_0^e0 * ... * x_{K-1}^e{K-1}.
struct TermDescriptor {
  Eigen::VectorXi exponents;      // length K, nonnegative
  std::string name;               // canonical, e.g. "1", "x0", "x0^2 y1"
  std::vector<int> source_vars;   // state indices with exponent > 0, ascending
  std::vector<int> source_nodes;  // distinct nodes of source_vars, ascending

  int degree() const { return exponents.sum(); }
};

// Ordered monomial basis of total degree 0..max_degree over the K state
// variables. Term order is graded lexicographic: degree ascending, ties
// broken by exponent vectors with earlier variables carrying higher powers
// first (1, x0, y0, x0^2, x0 y0, y0^2, ...). Immutable once built.
class FeatureLibrary {
 public:
  FeatureLibrary(StateVariableMap svmap, int max_degree);

  const std::vector<TermDescriptor>& terms() const { return terms_; }
  const TermDescriptor& term(int j) const { return terms_.at(j); }
  int size() const { return static_cast<int>(terms_.size()); }
  int max_degree() const { return max_degree_; }
  const StateVariableMap& svmap() const { return svmap_; }

  std::vector<std::string> term_names() const;
  // Column index of the monomial with the given exponent vector, -1 if the
  // library does not contain it.
  int index_of(const Eigen::VectorXi& exponents) const;

  // Data matrix Theta(X): column j evaluates term j row-wise over states
  // (T×K in, T×C out). Column 0 is all ones.
  Eigen::MatrixXd evaluate(const Eigen::MatrixXd& states) const;
  Eigen::VectorXd evaluate_row(const Eigen::VectorXd& state) const;

 private:
  StateVariableMap svmap_;
  int max_degree_;
  std::vector<TermDescriptor> terms_;
  std::map<std::vector<int>, int> index_;
};

FeatureLibrary build_library(const StateVariableMap& svmap, int max_degree);

// Scales each column to unit Euclidean norm; returns the scaled matrix and
// the scale vector. Zero-norm columns are left untouched with scale 1.
// Coefficients fitted on the scaled matrix map back as xi = xi_scaled / scale.
std::pair<Eigen::MatrixXd, Eigen::VectorXd> column_normalize(
    const Eigen::MatrixXd& theta);

}  // namespace sindyg
