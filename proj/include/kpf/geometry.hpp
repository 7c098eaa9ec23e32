#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "kpf/errors.hpp"

namespace kpf {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kPi = 3.14159265358979323846;

// Rectangle with possibly infinite sides.
struct Rect2 {
  double x_lo = -kInf;
  double x_hi = kInf;
  double y_lo = -kInf;
  double y_hi = kInf;

  bool compact() const {
    return std::isfinite(x_lo) && std::isfinite(x_hi) && std::isfinite(y_lo) &&
           std::isfinite(y_hi);
  }
  double width() const { return x_hi - x_lo; }
  double height() const { return y_hi - y_lo; }
  double diagonal() const { return std::hypot(width(), height()); }

  static Rect2 plane() { return {}; }
  static Rect2 square(double half) { return {-half, half, -half, half}; }
};

inline void validate(const Rect2& r) {
  if (!(r.x_lo < r.x_hi) || !(r.y_lo < r.y_hi))
    throw ValidationError("degenerate rectangle");
}

inline void validate_compact(const Rect2& r) {
  validate(r);
  if (!r.compact()) throw ValidationError("rectangle must be compact");
}

// Finite tensor partition of a compact rectangle. First/last cuts are the
// rectangle bounds; the norm is the largest cell diagonal.
struct GridPartition {
  std::vector<double> x_cuts;
  std::vector<double> y_cuts;

  std::size_t nx() const { return x_cuts.size() - 1; }
  std::size_t ny() const { return y_cuts.size() - 1; }
  std::size_t cells() const { return nx() * ny(); }

  Rect2 rect() const {
    return {x_cuts.front(), x_cuts.back(), y_cuts.front(), y_cuts.back()};
  }

  Rect2 cell(std::size_t i, std::size_t j) const {
    return {x_cuts[i], x_cuts[i + 1], y_cuts[j], y_cuts[j + 1]};
  }

  double norm() const {
    double dx = 0.0, dy = 0.0;
    for (std::size_t i = 0; i + 1 < x_cuts.size(); ++i)
      dx = std::max(dx, x_cuts[i + 1] - x_cuts[i]);
    for (std::size_t j = 0; j + 1 < y_cuts.size(); ++j)
      dy = std::max(dy, y_cuts[j + 1] - y_cuts[j]);
    return std::hypot(dx, dy);
  }

  static GridPartition uniform(const Rect2& r, std::size_t nx, std::size_t ny);
  static GridPartition from_cuts(std::vector<double> xs, std::vector<double> ys);

  // Splits every interval at its midpoint.
  GridPartition refined() const;
};

// Strictly increasing cut list for [a, b]: endpoints, interior seeds, and a
// uniform fill so no interval exceeds max_step.
std::vector<double> build_cuts(double a, double b, const std::vector<double>& seeds,
                               double max_step);

}  // namespace kpf
