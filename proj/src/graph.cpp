#include "sindyg/graph.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "sindyg/errors.hpp"
#include "sindyg/rng.hpp"
#include "io_util.hpp"

namespace sindyg {

WeightedGraph::WeightedGraph(Eigen::MatrixXd adjacency, bool directed)
    : adjacency_(std::move(adjacency)), directed_(directed) {
  const auto n = adjacency_.rows();
  if (n < 1 || adjacency_.cols() != n) {
    throw std::invalid_argument("adjacency must be a square matrix with n >= 1");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double w = adjacency_(i, j);
      if (!(w >= 0.0)) {
        throw std::invalid_argument("adjacency weights must be nonnegative and finite");
      }
    }
    if (adjacency_(i, i) != 0.0) {
      throw std::invalid_argument("adjacency diagonal must be zero");
    }
  }
  if (!directed_ && adjacency_ != adjacency_.transpose().eval()) {
    throw std::invalid_argument("undirected graph requires a symmetric adjacency");
  }
}

int WeightedGraph::edge_count() const {
  int count = 0;
  const int n = n_nodes();
  for (int i = 0; i < n; ++i) {
    for (int j = directed_ ? 0 : i + 1; j < n; ++j) {
      if (i != j && adjacency_(i, j) > 0.0) ++count;
    }
  }
  return count;
}

Eigen::VectorXi WeightedGraph::degrees() const {
  const int n = n_nodes();
  Eigen::VectorXi deg = Eigen::VectorXi::Zero(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && (adjacency_(i, j) > 0.0 || adjacency_(j, i) > 0.0)) ++deg(i);
    }
  }
  return deg;
}

StateVariableMap::StateVariableMap(int n_nodes, int vars_per_node)
    : n_nodes_(n_nodes), vars_per_node_(vars_per_node) {
  if (n_nodes < 1) throw std::invalid_argument("n_nodes must be >= 1");
  if (vars_per_node < 1) throw std::invalid_argument("vars_per_node must be >= 1");
}

int StateVariableMap::node_of(int state_index) const {
  if (state_index < 0 || state_index >= total()) {
    throw std::invalid_argument("state index out of range");
  }
  return state_index / vars_per_node_;
}

int StateVariableMap::slot_of(int state_index) const {
  if (state_index < 0 || state_index >= total()) {
    throw std::invalid_argument("state index out of range");
  }
  return state_index % vars_per_node_;
}

std::vector<int> StateVariableMap::state_indices_of(int node) const {
  if (node < 0 || node >= n_nodes_) throw std::invalid_argument("node out of range");
  std::vector<int> out(vars_per_node_);
  for (int s = 0; s < vars_per_node_; ++s) out[s] = node * vars_per_node_ + s;
  return out;
}

std::string StateVariableMap::var_name(int state_index) const {
  const int node = node_of(state_index);
  const int slot = slot_of(state_index);
  if (vars_per_node_ == 2) {
    return (slot == 0 ? "x" : "y") + std::to_string(node);
  }
  return "s" + std::to_string(node) + "_" + std::to_string(slot);
}

std::vector<std::string> StateVariableMap::var_names() const {
  std::vector<std::string> out(total());
  for (int i = 0; i < total(); ++i) out[i] = var_name(i);
  return out;
}

WeightedGraph generate_er(int n_nodes, double edge_prob, double w_min,
                          double w_max, std::uint64_t seed) {
  if (n_nodes < 1) throw std::invalid_argument("n_nodes must be >= 1");
  if (!(edge_prob >= 0.0 && edge_prob <= 1.0)) {
    throw std::invalid_argument("edge_prob must lie in [0, 1]");
  }
  if (!(w_min >= 0.0) || !(w_min <= w_max)) {
    throw std::invalid_argument("weight range requires 0 <= w_min <= w_max");
  }
  Rng rng(seed);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_nodes, n_nodes);
  for (int i = 0; i < n_nodes; ++i) {
    for (int j = i + 1; j < n_nodes; ++j) {
      if (rng.uniform() < edge_prob) {
        const double w = rng.uniform(w_min, w_max);
        a(i, j) = w;
        a(j, i) = w;
      }
    }
  }
  return WeightedGraph(std::move(a), /*directed=*/false);
}

WeightedGraph generate_sf(int n_nodes, int m_attach, double w_min,
                          double w_max, std::uint64_t seed) {
  if (n_nodes < 1) throw std::invalid_argument("n_nodes must be >= 1");
  if (m_attach < 1 || m_attach >= n_nodes) {
    throw std::invalid_argument("m_attach must satisfy 1 <= m_attach < n_nodes");
  }
  if (!(w_min >= 0.0) || !(w_min <= w_max)) {
    throw std::invalid_argument("weight range requires 0 <= w_min <= w_max");
  }
  Rng rng(seed);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_nodes, n_nodes);
  std::vector<int> degree(n_nodes, 0);

  const int seed_size = std::min(m_attach + 1, n_nodes);
  for (int i = 0; i < seed_size; ++i) {
    for (int j = i + 1; j < seed_size; ++j) {
      const double w = rng.uniform(w_min, w_max);
      a(i, j) = w;
      a(j, i) = w;
      ++degree[i];
      ++degree[j];
    }
  }

  for (int v = seed_size; v < n_nodes; ++v) {
    // Degree snapshot at the start of this node's step.
    std::vector<double> cum(v);
    double total = 0.0;
    for (int u = 0; u < v; ++u) {
      total += static_cast<double>(degree[u]);
      cum[u] = total;
    }
    std::vector<int> chosen;
    while (static_cast<int>(chosen.size()) < m_attach) {
      const double r = rng.uniform() * total;
      int target = 0;
      while (target < v - 1 && cum[target] <= r) ++target;
      bool duplicate = false;
      for (int c : chosen) {
        if (c == target) {
          duplicate = true;
          break;
        }
      }
      if (duplicate) continue;
      chosen.push_back(target);
      const double w = rng.uniform(w_min, w_max);
      a(v, target) = w;
      a(target, v) = w;
    }
    for (int c : chosen) ++degree[c];
    degree[v] += m_attach;
  }
  return WeightedGraph(std::move(a), /*directed=*/false);
}

Eigen::MatrixXd normalized_adjacency(const WeightedGraph& g) {
  const double max_w = g.max_weight();
  Eigen::MatrixXd norm;
  if (max_w > 0.0) {
    norm = g.adjacency() / max_w;
  } else {
    norm = Eigen::MatrixXd::Zero(g.n_nodes(), g.n_nodes());
  }
  norm.diagonal().setOnes();
  return norm;
}

void save_graph(const WeightedGraph& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open " + path + " for writing");
  out << "n=" << g.n_nodes() << ",directed=" << (g.directed() ? 1 : 0) << "\n";
  for (int i = 0; i < g.n_nodes(); ++i) {
    for (int j = 0; j < g.n_nodes(); ++j) {
      if (j > 0) out << ",";
      out << detail::fmt_double(g.adjacency()(i, j));
    }
    out << "\n";
  }
  if (!out) throw FormatError("write to " + path + " failed");
}

WeightedGraph load_graph(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  std::string header;
  if (!std::getline(in, header)) throw FormatError(path + ": empty file");
  if (!header.empty() && header.back() == '\r') header.pop_back();

  int n = 0, directed_flag = 0;
  if (std::sscanf(header.c_str(), "n=%d,directed=%d", &n, &directed_flag) != 2 ||
      n < 1 || (directed_flag != 0 && directed_flag != 1)) {
    throw FormatError(path + ":1: expected header `n=<int>,directed=<0|1>`");
  }

  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i) {
    std::string line;
    if (!std::getline(in, line)) {
      throw FormatError(path + ": expected " + std::to_string(n) +
                        " rows, got " + std::to_string(i));
    }
    const auto fields = detail::split_csv_line(line);
    if (static_cast<int>(fields.size()) != n) {
      throw FormatError(path + ":" + std::to_string(i + 2) + ": expected " +
                        std::to_string(n) + " columns, got " +
                        std::to_string(fields.size()));
    }
    for (int j = 0; j < n; ++j) {
      std::size_t pos = 0;
      double v = 0.0;
      try {
        v = std::stod(fields[j], &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos != fields[j].size() || fields[j].empty()) {
        throw FormatError(path + ":" + std::to_string(i + 2) + ": column " +
                          std::to_string(j + 1) + ": not a number: `" +
                          fields[j] + "`");
      }
      if (v < 0.0) {
        throw FormatError(path + ":" + std::to_string(i + 2) + ": column " +
                          std::to_string(j + 1) + ": negative weight");
      }
      a(i, j) = v;
    }
  }
  try {
    return WeightedGraph(std::move(a), directed_flag == 1);
  } catch (const std::invalid_argument& e) {
    throw FormatError(path + ": " + e.what());
  }
}

}  // namespace sindyg
