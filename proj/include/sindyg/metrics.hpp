#pragma once

#include <Eigen/Dense>
#include <chrono>
#include <limits>
#include <string>
#include <type_traits>
#include <utility>

#include "sindyg/regression.hpp"

namespace sindyg {

// Number of active terms: entries with |value| > tol. STLSQ produces hard
// zeros, so the default tolerance is exact.
int complexity(const Eigen::MatrixXd& xi, double tol = 0.0);
int complexity(const CoefficientMatrix& model, double tol = 0.0);

// Coefficient Error Index: mean absolute entrywise difference between a
// fitted and the true coefficient matrix.
double cei(const CoefficientMatrix& predicted, const CoefficientMatrix& truth);

// Pooled R^2 over all entries, with per-variable means in the total sum of
// squares. Throws when the observed signal has zero total variance.
double r_squared(const Eigen::MatrixXd& predicted,
                 const Eigen::MatrixXd& observed);

double mse(const Eigen::MatrixXd& predicted, const Eigen::MatrixXd& observed);

// Wall-clock time of the solver call only.
template <class Fit>
auto timed_fit(Fit&& fit)
    -> std::pair<std::invoke_result_t<Fit>, double> {
  const auto start = std::chrono::steady_clock::now();
  auto result = std::forward<Fit>(fit)();
  const auto stop = std::chrono::steady_clock::now();
  const double seconds = std::chrono::duration<double>(stop - start).count();
  return {std::move(result), seconds};
}

// One scored fit. Fields without a defined value (e.g. CEI with no known
// true model) stay NaN and serialize as "n/a".
struct MetricsReport {
  std::string dataset_id;
  std::string method;
  int gamma = 0;
  double cei = std::numeric_limits<double>::quiet_NaN();
  double train_r2 = std::numeric_limits<double>::quiet_NaN();
  double train_mse = std::numeric_limits<double>::quiet_NaN();
  double test_r2 = std::numeric_limits<double>::quiet_NaN();
  double test_mse = std::numeric_limits<double>::quiet_NaN();
  double train_time_s = std::numeric_limits<double>::quiet_NaN();

  static std::string csv_header();
  std::string csv_row() const;
};

}  // namespace sindyg
