#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace sindyg {

// Directed weighted interaction structure. adjacency(i, j) is the weight of
// the edge from node i to node j; weights are nonnegative, the diagonal is
// zero, and undirected graphs store a symmetric matrix. Immutable after
// construction, safe to share across threads.
class WeightedGraph {
 public:
  WeightedGraph(Eigen::MatrixXd adjacency, bool directed);

  int n_nodes() const { return static_cast<int>(adjacency_.rows()); }
  const Eigen::MatrixXd& adjacency() const { return adjacency_; }
  bool directed() const { return directed_; }

  double max_weight() const { return adjacency_.maxCoeff(); }
  // Number of stored edges: unordered pairs for undirected graphs, ordered
  // pairs otherwise.
  int edge_count() const;
  Eigen::VectorXi degrees() const;

 private:
  Eigen::MatrixXd adjacency_;
  bool directed_;
};

// Layout of the flattened state vector: vars_per_node consecutive slots per
// node, node-major. For the complex-oscillator decomposition vars_per_node
// is 2 and the slots are the real and imaginary parts.
class StateVariableMap {
 public:
  explicit StateVariableMap(int n_nodes, int vars_per_node = 2);

  int n_nodes() const { return n_nodes_; }
  int vars_per_node() const { return vars_per_node_; }
  int total() const { return n_nodes_ * vars_per_node_; }

  int node_of(int state_index) const;
  int slot_of(int state_index) const;
  std::vector<int> state_indices_of(int node) const;

  // Canonical variable names: x<node>/y<node> when vars_per_node == 2,
  // s<node>_<slot> otherwise.
  std::string var_name(int state_index) const;
  std::vector<std::string> var_names() const;

  bool operator==(const StateVariableMap& other) const {
    return n_nodes_ == other.n_nodes_ && vars_per_node_ == other.vars_per_node_;
  }

 private:
  int n_nodes_;
  int vars_per_node_;
};

// Erdős–Rényi generator. Unordered node pairs are scanned in row-major
// order (i < j); each pair draws one uniform for the edge decision and, if
// accepted, one uniform in [w_min, w_max] for the weight, placed
// symmetrically.
WeightedGraph generate_er(int n_nodes, double edge_prob, double w_min,
                          double w_max, std::uint64_t seed);

// Preferential-attachment generator. Starts from a complete graph on
// m_attach + 1 nodes (pair weights drawn in row-major order), then each new
// node attaches to m_attach distinct existing nodes with probability
// proportional to their degree at the start of that node's step. Target
// draws that hit an already-chosen node are rejected and redrawn; each
// accepted edge draws its weight immediately.
WeightedGraph generate_sf(int n_nodes, int m_attach, double w_min,
                          double w_max, std::uint64_t seed);

// Adjacency scaled into [0, 1] by the global maximum weight (zero matrix if
// the graph has no edges), with the diagonal forced to 1: a node always
// fully influences itself.
Eigen::MatrixXd normalized_adjacency(const WeightedGraph& g);

// CSV round trip. First line `n=<int>,directed=<0|1>`, then n rows of n
// comma-separated nonnegative decimals.
WeightedGraph load_graph(const std::string& path);
void save_graph(const WeightedGraph& g, const std::string& path);

}  // namespace sindyg
