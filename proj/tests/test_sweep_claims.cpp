// Directional behavior of the sensitivity sweeps at reduced scale: the
// graph-penalized fit should beat the plain fit on coefficient error at
// every network size, show slower complexity growth in the edge weights,
// and hold up better on short training windows.
#include <cstdio>
#include <string>
#include <vector>

#include "sindyg/experiment.hpp"
#include "sindyg/rng.hpp"

using namespace sindyg;

namespace {

int failures = 0;

void check(bool ok, const std::string& what) {
  std::printf("%s %s\n", ok ? "ok  " : "FAIL", what.c_str());
  if (!ok) ++failures;
}

struct CellMeans {
  double cei_s = 0, cei_g = 0, gamma_s = 0, gamma_g = 0, r2_s = 0, r2_g = 0;
  int n_s = 0, n_g = 0;
};

CellMeans ensemble(const ExperimentConfig& cfg, int reps, std::uint64_t tag) {
  CellMeans m;
  for (int rep = 0; rep < reps; ++rep) {
    const RunResult run =
        run_general_rep(cfg, derive_seed(derive_seed(cfg.seed, tag), rep), "t");
    if (!run.sindy.failed) {
      m.cei_s += run.sindy.metrics.cei;
      m.gamma_s += run.sindy.metrics.gamma;
      m.r2_s += run.sindy.metrics.test_r2;
      ++m.n_s;
    }
    if (!run.sindyg.failed) {
      m.cei_g += run.sindyg.metrics.cei;
      m.gamma_g += run.sindyg.metrics.gamma;
      m.r2_g += run.sindyg.metrics.test_r2;
      ++m.n_g;
    }
  }
  if (m.n_s > 0) {
    m.cei_s /= m.n_s;
    m.gamma_s /= m.n_s;
    m.r2_s /= m.n_s;
  }
  if (m.n_g > 0) {
    m.cei_g /= m.n_g;
    m.gamma_g /= m.n_g;
    m.r2_g /= m.n_g;
  }
  return m;
}

}  // namespace

int main() {
  ExperimentConfig base;
  base.reps = 6;
  base.n_test = 1;
  base.test_t_end = 3.0;

  // Coefficient error stays ordered across network sizes.
  for (int n : {3, 5}) {
    ExperimentConfig cfg = base;
    cfg.n_nodes = n;
    const CellMeans m = ensemble(cfg, base.reps, 10 + n);
    check(m.n_g >= 4 && m.n_s >= 4,
          "n_nodes=" + std::to_string(n) + ": enough successful repetitions");
    check(m.cei_g < m.cei_s,
          "n_nodes=" + std::to_string(n) + ": mean CEI sindyg < sindy (" +
              std::to_string(m.cei_g) + " < " + std::to_string(m.cei_s) + ")");
  }

  // Raising the maximum edge weight inflates plain-fit complexity faster.
  {
    ExperimentConfig lo = base, hi = base;
    hi.w_max = 0.5;
    const CellMeans m_lo = ensemble(lo, base.reps, 77);
    const CellMeans m_hi = ensemble(hi, base.reps, 77);
    const double growth_s = m_hi.gamma_s - m_lo.gamma_s;
    const double growth_g = m_hi.gamma_g - m_lo.gamma_g;
    check(growth_s > growth_g,
          "max edge weight: sindy complexity grows faster (" +
              std::to_string(growth_s) + " > " + std::to_string(growth_g) + ")");
  }

  // Training-window sweep: the graph-penalized fit dominates at every
  // length, including windows shorter than the library size, and gains
  // from more data.
  {
    ExperimentConfig longer = base, shorter = base;
    shorter.t_end = 2.0;
    const CellMeans m_long = ensemble(longer, base.reps, 88);
    const CellMeans m_short = ensemble(shorter, base.reps, 88);
    check(m_short.r2_g > m_short.r2_s,
          "train length 2s: sindyg test R^2 higher (" +
              std::to_string(m_short.r2_g) + " > " +
              std::to_string(m_short.r2_s) + ")");
    check(m_long.r2_g > m_long.r2_s,
          "train length 20s: sindyg test R^2 higher (" +
              std::to_string(m_long.r2_g) + " > " +
              std::to_string(m_long.r2_s) + ")");
    check(m_long.r2_g > m_short.r2_g,
          "sindyg improves with more data (" + std::to_string(m_long.r2_g) +
              " > " + std::to_string(m_short.r2_g) + ")");
    check(m_long.gamma_g < m_short.gamma_g,
          "sindyg complexity shrinks toward the truth with more data (" +
              std::to_string(m_long.gamma_g) + " < " +
              std::to_string(m_short.gamma_g) + ")");
  }

  std::printf("%d failure(s)\n", failures);
  return failures == 0 ? 0 : 1;
}
