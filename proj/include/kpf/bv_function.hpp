#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "kpf/errors.hpp"
#include "kpf/geometry.hpp"
#include "kpf/reduce.hpp"

namespace kpf {

// One product term u(x) * v(y).
struct SepTerm {
  std::function<double(double)> u;
  std::function<double(double)> v;
};

// Known transform, optionally in product form F(xi, eta) = fx(xi) * fy(eta).
struct TransformOracle {
  std::function<cplx(double, double)> eval;
  std::function<cplx(double)> factor_x;
  std::function<cplx(double)> factor_y;

  bool factored() const { return static_cast<bool>(factor_x) && static_cast<bool>(factor_y); }
};

// Evaluation oracle for f : R^2 -> R plus optional metadata. Everything past
// eval is advisory: engines use it for fast paths and panel alignment, and
// never require it.
struct BvFunction2 {
  std::function<double(double, double)> eval;

  std::optional<Rect2> support;
  // Nonempty: f equals the sum of the product terms (a single term is the
  // plain separable case).
  std::vector<SepTerm> separable;
  // Discontinuity / kink lines, used as mandatory panel and cut boundaries.
  std::vector<double> x_breaks;
  std::vector<double> y_breaks;
  // point -> (f(x+,y+), f(x+,y-), f(x-,y+), f(x-,y-))
  std::vector<std::pair<std::array<double, 2>, std::array<double, 4>>> quadrant_limit_points;
  std::optional<double> known_variation;
  std::optional<TransformOracle> transform_oracle;
  // Registration vouched for the vanishing-at-infinity diagnostics.
  bool bv0_certified = false;

  double operator()(double x, double y) const { return eval(x, y); }
};

inline double eval_checked(const BvFunction2& f, double x, double y) {
  const double v = f.eval(x, y);
  if (!std::isfinite(v)) throw EvaluationError(x, y);
  return v;
}

std::optional<std::array<double, 4>> quadrant_limits_metadata(const BvFunction2& f,
                                                              double x, double y);

// Cheap vanishing-at-infinity probe; throws ValidationError when the sampled
// boundary maxima fail to decay. Certified functions skip it.
void require_vanishing(const BvFunction2& f);

// f(b,d) - f(a,d) - f(b,c) + f(a,c) from the four corner values.
inline double corner_difference(double fad, double fbd, double fac, double fbc) {
  return fbd - fad - fbc + fac;
}

// Complex-valued integrand g(t1, t2) with optional product factorization and
// oscillation hints for panel sizing.
struct Integrand2 {
  std::function<cplx(double, double)> eval;
  std::function<cplx(double)> gx;
  std::function<cplx(double)> gy;
  std::vector<double> x_breaks;
  std::vector<double> y_breaks;
  double osc_x = 0.0;  // dominant angular frequency, 0 = none
  double osc_y = 0.0;

  bool factored() const { return static_cast<bool>(gx) && static_cast<bool>(gy); }
  cplx operator()(double x, double y) const { return eval(x, y); }
};

Integrand2 make_integrand(std::function<cplx(double, double)> eval);
// e^{-i (xi t1 + eta t2)}
Integrand2 exp_integrand(double xi, double eta);

}  // namespace kpf
