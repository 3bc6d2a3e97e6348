#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "sindyg/errors.hpp"
#include "sindyg/graph.hpp"
#include "sindyg/rng.hpp"

using namespace sindyg;

namespace {

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

Eigen::MatrixXd simple_case_adjacency() {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3, 3);
  a(1, 2) = 1.0;
  a(2, 1) = 1.0;
  return a;
}

}  // namespace

TEST_CASE("state variable map round trip") {
  const StateVariableMap svmap(3, 2);
  CHECK(svmap.total() == 6);
  for (int i = 0; i < svmap.total(); ++i) {
    const int node = svmap.node_of(i);
    const auto indices = svmap.state_indices_of(node);
    CHECK(std::find(indices.begin(), indices.end(), i) != indices.end());
  }
  CHECK(svmap.var_name(0) == "x0");
  CHECK(svmap.var_name(1) == "y0");
  CHECK(svmap.var_name(4) == "x2");
  const StateVariableMap triple(2, 3);
  CHECK(triple.var_name(5) == "s1_2");
}

TEST_CASE("weighted graph validation") {
  CHECK_THROWS_AS(WeightedGraph(Eigen::MatrixXd::Zero(2, 3), false),
                  std::invalid_argument);
  Eigen::MatrixXd negative = Eigen::MatrixXd::Zero(2, 2);
  negative(0, 1) = -0.5;
  CHECK_THROWS_AS(WeightedGraph(negative, true), std::invalid_argument);
  Eigen::MatrixXd loop = Eigen::MatrixXd::Zero(2, 2);
  loop(0, 0) = 1.0;
  CHECK_THROWS_AS(WeightedGraph(loop, true), std::invalid_argument);
  Eigen::MatrixXd asym = Eigen::MatrixXd::Zero(2, 2);
  asym(0, 1) = 1.0;
  CHECK_THROWS_AS(WeightedGraph(asym, false), std::invalid_argument);
  CHECK_NOTHROW(WeightedGraph(asym, true));
}

TEST_CASE("er generator edge cases") {
  const WeightedGraph empty = generate_er(5, 0.0, 0.1, 0.5, 1);
  CHECK(empty.edge_count() == 0);
  CHECK(empty.adjacency().isZero(0.0));

  const WeightedGraph complete = generate_er(5, 1.0, 1.0, 1.0, 7);
  CHECK(complete.edge_count() == 10);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      CHECK(complete.adjacency()(i, j) == (i == j ? 0.0 : 1.0));
    }
  }

  CHECK_THROWS_AS(generate_er(5, 1.5, 0.0, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(generate_er(5, 0.5, 0.5, 0.1, 1), std::invalid_argument);
}

TEST_CASE("er generator replays the documented draw order") {
  // Independent replay: pairs scanned row-major, one uniform per pair, one
  // weight draw immediately after each accepted pair.
  const std::uint64_t seed = 42;
  const double p = 0.3, lo = 0.1, hi = 0.5;
  Rng rng(seed);
  Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(5, 5);
  for (int i = 0; i < 5; ++i) {
    for (int j = i + 1; j < 5; ++j) {
      if (rng.uniform() < p) {
        const double w = rng.uniform(lo, hi);
        expected(i, j) = w;
        expected(j, i) = w;
      }
    }
  }
  const WeightedGraph g = generate_er(5, p, lo, hi, seed);
  CHECK(g.adjacency() == expected);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      if (i != j && g.adjacency()(i, j) > 0.0) {
        CHECK(g.adjacency()(i, j) >= lo);
        CHECK(g.adjacency()(i, j) <= hi);
      }
    }
  }
}

TEST_CASE("er expected edge count over many seeds") {
  const int n = 20;
  const double p = 0.3;
  const double pairs = n * (n - 1) / 2.0;
  double total = 0.0;
  const int n_seeds = 200;
  for (int s = 0; s < n_seeds; ++s) {
    total += generate_er(n, p, 0.1, 0.5, 1000 + s).edge_count();
  }
  const double mean = total / n_seeds;
  const double expected = p * pairs;
  const double se = std::sqrt(pairs * p * (1 - p) / n_seeds);
  CHECK(std::abs(mean - expected) <= 3.0 * se);
}

TEST_CASE("sf generator") {
  const WeightedGraph triangle = generate_sf(3, 2, 1.0, 1.0, 1);
  CHECK(triangle.edge_count() == 3);

  const WeightedGraph tree = generate_sf(10, 1, 0.2, 0.9, 5);
  CHECK(tree.edge_count() == 9);
  // Connectivity of the m=1 tree: every node reachable from node 0.
  std::vector<bool> seen(10, false);
  std::vector<int> stack = {0};
  seen[0] = true;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v = 0; v < 10; ++v) {
      if (!seen[v] && tree.adjacency()(u, v) > 0.0) {
        seen[v] = true;
        stack.push_back(v);
      }
    }
  }
  for (bool s : seen) CHECK(s);

  const WeightedGraph hubby = generate_sf(50, 2, 1.0, 1.0, 9);
  Eigen::VectorXi deg = hubby.degrees();
  std::vector<int> sorted(deg.data(), deg.data() + deg.size());
  std::sort(sorted.begin(), sorted.end());
  const int median = sorted[sorted.size() / 2];
  CHECK(sorted.back() > median);

  CHECK_THROWS_AS(generate_sf(3, 3, 0.0, 1.0, 1), std::invalid_argument);
}

TEST_CASE("generators are deterministic in the seed") {
  const WeightedGraph a = generate_er(12, 0.4, 0.05, 0.2, 77);
  const WeightedGraph b = generate_er(12, 0.4, 0.05, 0.2, 77);
  CHECK(a.adjacency() == b.adjacency());
  const WeightedGraph c = generate_sf(12, 2, 0.05, 0.2, 77);
  const WeightedGraph d = generate_sf(12, 2, 0.05, 0.2, 77);
  CHECK(c.adjacency() == d.adjacency());
  CHECK(generate_er(12, 0.4, 0.05, 0.2, 78).adjacency() != a.adjacency());
}

TEST_CASE("normalized adjacency") {
  const WeightedGraph empty(Eigen::MatrixXd::Zero(2, 2), false);
  CHECK(normalized_adjacency(empty) == Eigen::MatrixXd::Identity(2, 2));

  const WeightedGraph simple(simple_case_adjacency(), false);
  Eigen::MatrixXd norm = normalized_adjacency(simple);
  Eigen::MatrixXd expected = simple_case_adjacency();
  expected.diagonal().setOnes();
  CHECK(norm == expected);

  Eigen::MatrixXd two = Eigen::MatrixXd::Zero(3, 3);
  two(0, 1) = two(1, 0) = 0.2;
  two(1, 2) = two(2, 1) = 0.4;
  const Eigen::MatrixXd n2 = normalized_adjacency(WeightedGraph(two, false));
  CHECK(n2(0, 1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(n2(1, 2) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(n2.minCoeff() >= 0.0);
  CHECK(n2.maxCoeff() <= 1.0);
  CHECK(n2.diagonal() == Eigen::Vector3d::Ones());
}

TEST_CASE("graph csv round trip and errors") {
  const auto path = temp_path("sindyg_graph_rt.csv");
  const WeightedGraph g(simple_case_adjacency(), false);
  save_graph(g, path.string());
  const WeightedGraph loaded = load_graph(path.string());
  CHECK(loaded.adjacency() == g.adjacency());
  CHECK(loaded.directed() == g.directed());

  const WeightedGraph random_g = generate_er(6, 0.5, 0.01, 0.97, 3);
  save_graph(random_g, path.string());
  CHECK(load_graph(path.string()).adjacency() == random_g.adjacency());

  const auto bad = temp_path("sindyg_graph_bad.csv");
  {
    std::ofstream out(bad);
    out << "n=2,directed=0\n0,1,2\n1,0\n";
  }
  CHECK_THROWS_AS(load_graph(bad.string()), FormatError);
  {
    std::ofstream out(bad);
    out << "n=2,directed=0\n0,-1\n-1,0\n";
  }
  CHECK_THROWS_AS(load_graph(bad.string()), FormatError);
  {
    std::ofstream out(bad);
    out << "nodes=2\n";
  }
  CHECK_THROWS_AS(load_graph(bad.string()), FormatError);
  CHECK_THROWS_AS(load_graph("/nonexistent/sindyg.csv"), FormatError);
  std::filesystem::remove(path);
  std::filesystem::remove(bad);
}
