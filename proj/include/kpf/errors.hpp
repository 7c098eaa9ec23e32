#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kpf {

// A function handle returned a non-finite value; carries the offending point.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(double x, double y)
      : std::runtime_error("non-finite evaluation at (" + std::to_string(x) +
                           ", " + std::to_string(y) + ")"),
        x_(x),
        y_(y) {}

  double x() const { return x_; }
  double y() const { return y_; }

 private:
  double x_;
  double y_;
};

// A refinement or window ladder failed to stabilize; carries the delta history.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(std::string what, std::vector<double> deltas)
      : std::runtime_error(std::move(what)), deltas_(std::move(deltas)) {}

  const std::vector<double>& deltas() const { return deltas_; }

 private:
  std::vector<double> deltas_;
};

// Precondition violation (bad rectangle, on-axis frequency, duplicate name, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace kpf
