// Acceptance suite: one line per criterion, nonzero exit if any fail.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "sindyg/errors.hpp"
#include "sindyg/experiment.hpp"
#include "sindyg/metrics.hpp"
#include "sindyg/oscillator.hpp"
#include "sindyg/regression.hpp"
#include "sindyg/rng.hpp"

using namespace sindyg;
namespace fs = std::filesystem;

namespace {

int failures = 0;
std::vector<std::string> notes;

void note(const std::string& msg) { notes.push_back(msg); }

void report(int id, const char* name, bool pass) {
  std::printf("%s criterion %2d: %s\n", pass ? "PASS" : "FAIL", id, name);
  for (const auto& n : notes) std::printf("       %s\n", n.c_str());
  notes.clear();
  if (!pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

bool same_support(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if ((a(i) != 0.0) != (b(i) != 0.0)) return false;
  }
  return true;
}

Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng,
                              double lo = -1.0, double hi = 1.0) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = rng.uniform(lo, hi);
  return m;
}

struct Agg {
  double mean = 0.0;
  double se = 0.0;
};

Agg aggregate(const std::vector<double>& xs) {
  Agg a;
  for (double x : xs) a.mean += x;
  a.mean /= static_cast<double>(xs.size());
  if (xs.size() >= 2) {
    double ss = 0.0;
    for (double x : xs) ss += (x - a.mean) * (x - a.mean);
    a.se = std::sqrt(ss / (xs.size() - 1)) / std::sqrt(double(xs.size()));
  }
  return a;
}

// --- criterion 1: simple-case structural recovery at defaults ---
void criterion_1() {
  const auto start = std::chrono::steady_clock::now();
  ExperimentConfig config;
  config.out_dir = fresh_dir("sindyg_acc1").string();
  const SimpleCaseResult r = run_simple_case(config);
  const double elapsed = seconds_since(start);

  const int gamma_g = r.run.sindyg.metrics.gamma;
  const int gamma_s = r.run.sindy.metrics.gamma;
  const bool support_ok = same_support(r.run.sindyg.model.xi, r.truth.xi);
  note("sindyg gamma=" + std::to_string(gamma_g) +
       " support_exact=" + (support_ok ? "yes" : "no") +
       " cei=" + std::to_string(r.run.sindyg.metrics.cei));
  note("sindy  gamma=" + std::to_string(gamma_s) +
       " cei=" + std::to_string(r.run.sindy.metrics.cei));
  note("train r2: sindyg=" + std::to_string(r.run.sindyg.metrics.train_r2) +
       " sindy=" + std::to_string(r.run.sindy.metrics.train_r2) +
       "  runtime=" + std::to_string(elapsed) + "s");
  const bool pass = gamma_g == 32 && support_ok &&
                    r.run.sindyg.metrics.cei <= 0.01 && gamma_s >= gamma_g &&
                    r.run.sindy.metrics.cei >= r.run.sindyg.metrics.cei &&
                    r.run.sindyg.metrics.train_r2 >= 0.9999 &&
                    r.run.sindy.metrics.train_r2 >= 0.9999 && elapsed < 30.0;
  report(1, "simple-case structural recovery (gamma=32, CEI, R^2)", pass);
}

// --- criterion 2: generalization on 5 unseen trajectories ---
void criterion_2() {
  ExperimentConfig config;
  config.n_test = 5;
  config.out_dir = fresh_dir("sindyg_acc2").string();
  const SimpleCaseResult r = run_simple_case(config);
  bool pass = r.sindyg_test_r2.size() == 5 && r.sindy_test_r2.size() == 5;
  for (std::size_t i = 0; pass && i < r.sindyg_test_r2.size(); ++i) {
    if (!(r.sindyg_test_r2[i] >= 0.999 &&
          r.sindyg_test_r2[i] >= r.sindy_test_r2[i])) {
      pass = false;
    }
  }
  if (!r.sindyg_test_r2.empty()) {
    note("sindyg per-trajectory R^2 min=" +
         std::to_string(*std::min_element(r.sindyg_test_r2.begin(),
                                          r.sindyg_test_r2.end())));
  }
  report(2, "test-trajectory generalization on 5 unseen initial conditions",
         pass);
}

// --- criterion 3: L = 0 reduction to rescaled plain STLSQ ---
void criterion_3() {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(333);
  const FeatureLibrary lib = build_library(StateVariableMap(1, 2), 2);
  const WeightedGraph lone(Eigen::MatrixXd::Zero(1, 1), false);
  bool pass = true;
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXd states = random_matrix(40, 2, rng);
    const Eigen::MatrixXd theta = lib.evaluate(states);
    const Eigen::MatrixXd xdot = random_matrix(40, 2, rng);
    SolverConfig cfg;
    cfg.lambda = 0.05;
    cfg.eta = 0.15;
    cfg.L = 0.0;
    const PenaltyMatrix pen = compute_penalty(lib, lone, cfg);
    SolverConfig plain = cfg;
    plain.lambda = 0.25 * cfg.lambda;
    plain.eta = 2.0 * cfg.eta;
    const double diff = (stlsq_graph(theta, xdot, pen, cfg) -
                         stlsq(theta, xdot, plain))
                            .cwiseAbs()
                            .maxCoeff();
    worst = std::max(worst, diff);
    if (diff > 1e-10) pass = false;
  }
  const double elapsed = seconds_since(start);
  note("max entrywise difference over 20 datasets: " + std::to_string(worst) +
       "  runtime=" + std::to_string(elapsed) + "s");
  report(3, "L=0 penalty reduces to stlsq(0.25*lambda, 2*eta)",
         pass && elapsed < 10.0);
}

// --- criterion 4: transform-and-map-back vs modified normal equations ---
void criterion_4() {
  Rng rng(444);
  bool pass = true;
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index c = 8;
    const Eigen::MatrixXd full_theta = random_matrix(50, c, rng);
    const Eigen::VectorXd target = random_matrix(50, 1, rng);
    // Fixed support: a random subset of at least two columns.
    std::vector<int> support;
    for (int j = 0; j < c; ++j) {
      if (rng.uniform() < 0.6) support.push_back(j);
    }
    while (support.size() < 2) support.push_back(static_cast<int>(support.size()));
    Eigen::MatrixXd theta(50, static_cast<Eigen::Index>(support.size()));
    for (std::size_t j = 0; j < support.size(); ++j) {
      theta.col(j) = full_theta.col(support[j]);
    }
    Eigen::VectorXd f(static_cast<Eigen::Index>(support.size()));
    for (Eigen::Index j = 0; j < f.size(); ++j) f(j) = rng.uniform(0.05, 1.0);
    const double lambda = 0.1;

    PenaltyMatrix pen;
    pen.f = f;
    SolverConfig cfg;
    cfg.lambda = lambda;
    cfg.eta = 0.0;
    const Eigen::MatrixXd via_transform = stlsq_graph(theta, target, pen, cfg);

    Eigen::MatrixXd gram = theta.transpose() * theta;
    gram += (lambda * f.cwiseProduct(f)).asDiagonal();
    const Eigen::VectorXd direct = gram.ldlt().solve(theta.transpose() * target);
    const double diff = (via_transform.col(0) - direct).cwiseAbs().maxCoeff();
    worst = std::max(worst, diff);
    if (diff > 1e-8) pass = false;
  }
  note("max difference over 20 instances: " + std::to_string(worst));
  report(4, "penalized-ridge transform matches the modified normal equations",
         pass);
}

// --- criterion 5: exact recovery of random stable cubic systems ---
void criterion_5() {
  bool pass = true;
  double worst_s = 0.0, worst_g = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::uint64_t seed = 5000 + trial;
    const WeightedGraph graph =
        generate_er(2, 0.7, 0.1, 0.3, derive_seed(seed, 2));
    const SLParams params =
        sample_random_params(2, {0.2, 0.5}, {1.0, 3.0}, derive_seed(seed, 3));
    const FeatureLibrary lib = build_library(StateVariableMap(2, 2), 3);
    const CoefficientMatrix truth = true_coefficients(params, graph, lib);

    double smin = 1e300;
    for (Eigen::Index i = 0; i < truth.xi.size(); ++i) {
      if (truth.xi(i) != 0.0) smin = std::min(smin, std::abs(truth.xi(i)));
    }
    const Eigen::VectorXd x0 = random_initial_state(4, derive_seed(seed, 1));
    // T = 2000 samples at dt = 0.01.
    const Trajectory train = simulate_sl(params, graph, x0, 19.99, 0.01);

    SolverConfig cfg;
    cfg.lambda = 1e-8;
    cfg.eta = smin / 2.0;
    const CoefficientMatrix ms = fit_sindy(lib, train.states, train.derivs, cfg);

    // The graph solver thresholds transformed coefficients, so the same
    // half-the-smallest-coefficient rule is applied to f .* xi, the true
    // coefficients of the problem its STLSQ loop actually sees.
    SolverConfig cfg_g = cfg;
    const PenaltyMatrix pen = compute_penalty(lib, graph, cfg_g);
    double smin_t = 1e300;
    for (Eigen::Index j = 0; j < truth.xi.rows(); ++j) {
      for (Eigen::Index i = 0; i < truth.xi.cols(); ++i) {
        if (truth.xi(j, i) != 0.0) {
          smin_t = std::min(smin_t, pen.f(j, i) * std::abs(truth.xi(j, i)));
        }
      }
    }
    cfg_g.eta = smin_t / 2.0;
    const CoefficientMatrix mg =
        fit_sindyg(lib, graph, train.states, train.derivs, cfg_g);

    worst_s = std::max(worst_s, (ms.xi - truth.xi).cwiseAbs().maxCoeff());
    worst_g = std::max(worst_g, (mg.xi - truth.xi).cwiseAbs().maxCoeff());
  }
  pass = worst_s <= 1e-5 && worst_g <= 1e-5;
  note("worst recovery error: sindy=" + std::to_string(worst_s) +
       " sindyg=" + std::to_string(worst_g));
  report(5, "noiseless exact recovery by both solvers (20 systems)", pass);
}

// --- criterion 6: RK4 order and limit-cycle radius ---
void criterion_6() {
  SLParams params;
  params.sigma = Eigen::VectorXd::Constant(1, 0.2);
  params.omega = Eigen::VectorXd::Constant(1, std::numbers::pi / 2);
  const WeightedGraph lone(Eigen::MatrixXd::Zero(1, 1), false);
  const Eigen::Vector2d x0(0.1, 0.0);

  const Trajectory ref = simulate_sl(params, lone, x0, 2.0, 1e-5);
  const auto ref_at = [&](double t) {
    return ref.states.row(static_cast<Eigen::Index>(std::llround(t / 1e-5)));
  };
  double err_coarse = 0.0, err_fine = 0.0;
  const Trajectory coarse = simulate_sl(params, lone, x0, 2.0, 0.01);
  for (Eigen::Index i = 0; i < coarse.times.size(); ++i) {
    err_coarse = std::max(err_coarse, (coarse.states.row(i) - ref_at(coarse.times(i)))
                                          .lpNorm<Eigen::Infinity>());
  }
  const Trajectory fine = simulate_sl(params, lone, x0, 2.0, 0.005);
  for (Eigen::Index i = 0; i < fine.times.size(); ++i) {
    err_fine = std::max(err_fine, (fine.states.row(i) - ref_at(fine.times(i)))
                                      .lpNorm<Eigen::Infinity>());
  }
  const double ratio = err_coarse / err_fine;

  const Trajectory longrun = simulate_sl(params, lone, x0, 60.0, 0.01);
  const auto last = longrun.states.row(longrun.states.rows() - 1);
  const double radius = std::hypot(last(0), last(1));
  const double radius_err = std::abs(radius - std::sqrt(0.2));

  note("halving ratio=" + std::to_string(ratio) +
       " radius error=" + std::to_string(radius_err));
  report(6, "RK4 halving ratio in [12, 20] and sqrt(sigma) radius",
         ratio >= 12.0 && ratio <= 20.0 && radius_err <= 1e-3);
}

// --- criterion 7: penalty function unit suite ---
void criterion_7() {
  bool pass = true;

  // Midpoint: m = 0.5 gives exactly 0.5 for any L; the constant term too.
  Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(3, 3);
  adj(1, 2) = adj(2, 1) = 0.4;
  const WeightedGraph graph(adj, false);
  const FeatureLibrary lib = build_library(StateVariableMap(3, 2), 2);
  Eigen::VectorXi x0x1 = Eigen::VectorXi::Zero(6);
  x0x1(0) = 1;
  x0x1(2) = 1;  // source nodes {0, 1}; sink node 0 has m = (1 + 0) / 2
  for (double L : {0.0, 0.5, 8.0, 40.0}) {
    SolverConfig cfg;
    cfg.L = L;
    const PenaltyMatrix pen = compute_penalty(lib, graph, cfg);
    if (pen.f(lib.index_of(x0x1), 0) != 0.5) pass = false;
    if (pen.f(0, 0) != 0.5) pass = false;
  }

  // f(m=1, L=20, |S|=1) = 1/(1+e^10) within 1e-12.
  {
    SolverConfig cfg;
    cfg.L = 20.0;
    const PenaltyMatrix pen = compute_penalty(lib, graph, cfg);
    Eigen::VectorXi x1 = Eigen::VectorXi::Zero(6);
    x1(2) = 1;
    const double expected = 1.0 / (1.0 + std::exp(10.0));
    if (std::abs(pen.f(lib.index_of(x1), 2) - expected) > 1e-12) pass = false;
  }

  // Strict decrease in m and L-sharpening.
  const auto f_of = [](double w, double L) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3, 3);
    a(0, 1) = a(1, 0) = w;
    a(1, 2) = a(2, 1) = 1.0;
    const WeightedGraph g(a, false);
    const FeatureLibrary l = build_library(StateVariableMap(3, 2), 1);
    SolverConfig cfg;
    cfg.L = L;
    const PenaltyMatrix pen = compute_penalty(l, g, cfg);
    Eigen::VectorXi x1 = Eigen::VectorXi::Zero(6);
    x1(2) = 1;
    return pen.f(l.index_of(x1), 0);
  };
  double prev = 2.0;
  for (double m : {0.05, 0.2, 0.4, 0.6, 0.8, 0.95}) {
    const double f = f_of(m, 8.0);
    if (!(f < prev)) pass = false;
    prev = f;
  }
  for (double m : {0.1, 0.3, 0.7, 0.9}) {
    const double step = m < 0.5 ? 1.0 : 0.0;
    if (!(std::abs(f_of(m, 12.0) - step) < std::abs(f_of(m, 3.0) - step))) {
      pass = false;
    }
  }
  report(7, "penalty function unit suite (midpoint, endpoint, monotone, sharpening)",
         pass);
}

// --- criterion 8: ensemble directional claims with SE margins ---
void criterion_8() {
  const auto start = std::chrono::steady_clock::now();
  ExperimentConfig config;
  config.out_dir = fresh_dir("sindyg_acc8").string();
  const Table1Result table = run_table1(config);
  const double elapsed = seconds_since(start);

  bool pass = elapsed < 600.0;
  for (const auto& [label, sindy_cell, sindyg_cell] :
       {std::tuple{"er", &table.er_sindy, &table.er_sindyg},
        std::tuple{"sf", &table.sf_sindy, &table.sf_sindyg}}) {
    const auto values = [](const EnsembleCell& cell, auto getter) {
      std::vector<double> xs;
      for (const auto& m : cell.runs) xs.push_back(getter(m));
      return xs;
    };
    const auto cei_s = aggregate(values(*sindy_cell, [](auto& m) { return m.cei; }));
    const auto cei_g = aggregate(values(*sindyg_cell, [](auto& m) { return m.cei; }));
    const auto gam_s =
        aggregate(values(*sindy_cell, [](auto& m) { return double(m.gamma); }));
    const auto gam_g =
        aggregate(values(*sindyg_cell, [](auto& m) { return double(m.gamma); }));
    const auto r2_s =
        aggregate(values(*sindy_cell, [](auto& m) { return m.test_r2; }));
    const auto r2_g =
        aggregate(values(*sindyg_cell, [](auto& m) { return m.test_r2; }));

    const auto pooled = [](const Agg& a, const Agg& b) {
      return std::sqrt(a.se * a.se + b.se * b.se);
    };
    const bool cei_ok = cei_g.mean < cei_s.mean &&
                        (cei_s.mean - cei_g.mean) > pooled(cei_s, cei_g);
    const bool gam_ok = gam_g.mean <= gam_s.mean &&
                        (gam_s.mean - gam_g.mean) > pooled(gam_s, gam_g);
    const bool r2_ok = r2_g.mean > r2_s.mean &&
                       (r2_g.mean - r2_s.mean) > pooled(r2_s, r2_g);
    note(std::string(label) + ": CEI " + std::to_string(cei_s.mean) + " vs " +
         std::to_string(cei_g.mean) + ", gamma " + std::to_string(gam_s.mean) +
         " vs " + std::to_string(gam_g.mean) + ", test R2 " +
         std::to_string(r2_s.mean) + " vs " + std::to_string(r2_g.mean) +
         " (n=" + std::to_string(sindy_cell->runs.size()) + "/" +
         std::to_string(sindyg_cell->runs.size()) +
         ", failed=" + std::to_string(sindy_cell->n_failed) + "/" +
         std::to_string(sindyg_cell->n_failed) + ")");
    pass = pass && cei_ok && gam_ok && r2_ok;
  }
  note("runtime=" + std::to_string(elapsed) + "s");
  report(8, "ensemble directional claims with one-pooled-SE margins", pass);
}

// --- criterion 9: metrics unit suite, exact ---
void criterion_9() {
  bool pass = true;
  Rng rng(99);
  Eigen::MatrixXd m = random_matrix(8, 3, rng);
  CoefficientMatrix cm;
  cm.xi = m;
  if (cei(cm, cm) != 0.0) pass = false;
  if (r_squared(m, m) != 1.0) pass = false;
  const Eigen::MatrixXd offset = m + Eigen::MatrixXd::Constant(8, 3, 0.1);
  if (std::abs(mse(offset, m) - 0.01) > 1e-12) pass = false;
  if (complexity(Eigen::MatrixXd::Zero(10, 4)) != 0) pass = false;
  report(9, "metrics unit suite (trivial examples exact)", pass);
}

// --- criterion 10: determinism and format round trips ---
void criterion_10() {
  bool pass = true;

  // Repeated seeded runs produce byte-identical data outputs. Wall-clock
  // timing fields are the only run-to-run difference, so the file carrying
  // them is compared with that column blanked.
  const fs::path a = fresh_dir("sindyg_acc10_a");
  const fs::path b = fresh_dir("sindyg_acc10_b");
  ExperimentConfig config;
  config.t_end = 6.0;
  config.n_test = 1;
  config.test_t_end = 2.0;
  config.seed = 7;
  config.out_dir = a.string();
  run_simple_case(config);
  config.out_dir = b.string();
  run_simple_case(config);
  for (const char* name :
       {"simple_graph.csv", "train_trajectory.csv", "train_derivatives.csv",
        "model_true.json", "model_sindy.json", "model_sindyg.json",
        "heatmap.csv", "trajectory_comparison.csv"}) {
    if (slurp(a / name) != slurp(b / name)) {
      note(std::string("mismatch in ") + name);
      pass = false;
    }
  }
  const auto mask_time = [](std::string csv) {
    std::istringstream in(csv);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line)) {
      const auto cut = line.rfind(',');
      out << line.substr(0, cut) << ",T\n";
    }
    return out.str();
  };
  if (mask_time(slurp(a / "metrics.csv")) != mask_time(slurp(b / "metrics.csv"))) {
    note("metrics.csv differs beyond the timing column");
    pass = false;
  }

  // Graph CSV round trip: save -> load -> save reproduces the bytes.
  const WeightedGraph g = generate_er(6, 0.5, 0.013, 0.97, 321);
  const fs::path g1 = a / "roundtrip_graph.csv";
  const fs::path g2 = a / "roundtrip_graph_2.csv";
  save_graph(g, g1.string());
  save_graph(load_graph(g1.string()), g2.string());
  if (slurp(g1) != slurp(g2)) {
    note("graph csv round trip not lossless");
    pass = false;
  }

  // Model JSON round trip.
  const LoadedModel loaded = load_model((a / "model_sindyg.json").string());
  const fs::path m2 = a / "model_rt.json";
  save_model(loaded.model, loaded.config, loaded.method, m2.string());
  if (slurp(a / "model_sindyg.json") != slurp(m2)) {
    note("model json round trip not lossless");
    pass = false;
  }

  if (pass) {
    fs::remove_all(a);
    fs::remove_all(b);
  }
  report(10, "determinism and lossless format round trips", pass);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  std::printf("%d of 10 criteria passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}
