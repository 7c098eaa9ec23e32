#include "kpf/bv_function.hpp"

#include <cmath>

namespace kpf {

std::optional<std::array<double, 4>> quadrant_limits_metadata(const BvFunction2& f,
                                                              double x, double y) {
  for (const auto& [pt, lims] : f.quadrant_limit_points) {
    const double ax = 1e-12 * (1.0 + std::abs(pt[0]));
    const double ay = 1e-12 * (1.0 + std::abs(pt[1]));
    if (std::abs(pt[0] - x) <= ax && std::abs(pt[1] - y) <= ay) return lims;
  }
  return std::nullopt;
}

void require_vanishing(const BvFunction2& f) {
  if (f.bv0_certified) return;
  double first = 0.0, last = 0.0;
  const double radii[4] = {16.0, 64.0, 256.0, 1024.0};
  for (int k = 0; k < 4; ++k) {
    const double r = radii[k];
    double m = 0.0;
    for (int p = 0; p < 32; ++p) {
      const double s = -1.0 + 2.0 * static_cast<double>(p) / 31.0;
      m = std::max({m, std::abs(f.eval(r, s * r)), std::abs(f.eval(-r, s * r)),
                    std::abs(f.eval(s * r, r)), std::abs(f.eval(s * r, -r))});
    }
    if (k == 0) first = m;
    last = m;
  }
  if (last > std::max(1e-3, 0.05 * first))
    throw ValidationError(
        "function does not appear to vanish at infinity (override with assume_bv0)");
}

Integrand2 make_integrand(std::function<cplx(double, double)> eval) {
  Integrand2 g;
  g.eval = std::move(eval);
  return g;
}

Integrand2 exp_integrand(double xi, double eta) {
  Integrand2 g;
  g.eval = [xi, eta](double t1, double t2) {
    return std::exp(cplx(0.0, -(xi * t1 + eta * t2)));
  };
  g.gx = [xi](double t) { return std::exp(cplx(0.0, -xi * t)); };
  g.gy = [eta](double t) { return std::exp(cplx(0.0, -eta * t)); };
  g.osc_x = std::abs(xi);
  g.osc_y = std::abs(eta);
  return g;
}

}  // namespace kpf
