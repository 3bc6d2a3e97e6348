#pragma once

#include <stdexcept>
#include <string>

namespace sindyg {

// File parsing / schema problems (graph CSV, trajectory CSV, model JSON).
class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

// Integration blew up; carries the time at which the state left the
// admissible region.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& msg, double t_blowup)
      : std::runtime_error(msg), t_blowup_(t_blowup) {}
  double t_blowup() const { return t_blowup_; }

 private:
  double t_blowup_;
};

// Linear solver could not produce a reliable solution.
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace sindyg
