#include "sindyg/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include "io_util.hpp"

namespace sindyg {

int complexity(const Eigen::MatrixXd& xi, double tol) {
  if (!(tol >= 0.0)) throw std::invalid_argument("tol must be >= 0");
  int count = 0;
  for (Eigen::Index j = 0; j < xi.size(); ++j) {
    if (std::abs(xi(j)) > tol) ++count;
  }
  return count;
}

int complexity(const CoefficientMatrix& model, double tol) {
  return complexity(model.xi, tol);
}

double cei(const CoefficientMatrix& predicted, const CoefficientMatrix& truth) {
  if (predicted.xi.rows() != truth.xi.rows() ||
      predicted.xi.cols() != truth.xi.cols()) {
    throw std::invalid_argument("coefficient matrices have different shapes");
  }
  if (!predicted.term_names.empty() && !truth.term_names.empty() &&
      predicted.term_names != truth.term_names) {
    throw std::invalid_argument("coefficient matrices use different term orders");
  }
  return (predicted.xi - truth.xi).array().abs().mean();
}

double r_squared(const Eigen::MatrixXd& predicted,
                 const Eigen::MatrixXd& observed) {
  if (predicted.rows() != observed.rows() || predicted.cols() != observed.cols()) {
    throw std::invalid_argument("predicted and observed shapes differ");
  }
  const double ss_res = (predicted - observed).squaredNorm();
  const Eigen::RowVectorXd col_means = observed.colwise().mean();
  const double ss_tot = (observed.rowwise() - col_means).squaredNorm();
  if (ss_tot == 0.0) {
    throw std::invalid_argument("observed signal has zero variance; R^2 undefined");
  }
  return 1.0 - ss_res / ss_tot;
}

double mse(const Eigen::MatrixXd& predicted, const Eigen::MatrixXd& observed) {
  if (predicted.rows() != observed.rows() || predicted.cols() != observed.cols()) {
    throw std::invalid_argument("predicted and observed shapes differ");
  }
  return (predicted - observed).squaredNorm() /
         static_cast<double>(observed.size());
}

std::string MetricsReport::csv_header() {
  return "dataset_id,method,gamma,cei,train_r2,train_mse,test_r2,test_mse,"
         "train_time_s";
}

namespace {

std::string field(double v) {
  return std::isnan(v) ? "n/a" : detail::fmt_double(v);
}

}  // namespace

std::string MetricsReport::csv_row() const {
  return dataset_id + "," + method + "," + std::to_string(gamma) + "," +
         field(cei) + "," + field(train_r2) + "," + field(train_mse) + "," +
         field(test_r2) + "," + field(test_mse) + "," + field(train_time_s);
}

}  // namespace sindyg
