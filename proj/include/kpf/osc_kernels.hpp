#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "kpf/errors.hpp"
#include "kpf/geometry.hpp"

namespace kpf {

// Sine integral Si(x) = int_0^x sin t / t dt. Absolute accuracy <= 1e-12:
// composite panels up to |x| = 50, asymptotic expansion beyond.
double si(double x);

// Dirichlet difference window parameters, 0 < alpha < beta.
struct KernelSpec {
  double alpha;
  double beta;

  KernelSpec(double a, double b) : alpha(a), beta(b) {
    if (!(0.0 < a) || !(a < b) || !std::isfinite(b))
      throw ValidationError("KernelSpec requires 0 < alpha < beta < inf");
  }
};

// h_{alpha,beta}(t) = (sin(beta t) - sin(alpha t)) / (pi t), series branch near 0.
double dirichlet_window(const KernelSpec& spec, double t);

// (sin(u2 t) - sin(u1 t)) / t with the removable singularity handled; equals
// int_{u1}^{u2} cos(t tau) dtau.
double cos_window(double u1, double u2, double t);

// int_0^z h_{alpha,beta}(t) dt = (Si(beta z) - Si(alpha z)) / pi.
double sin_window_primitive(const KernelSpec& spec, double z);

// Increasing positive sequence with certified lacunary constant A:
// u_m * sum_{j>=m} 1/u_j <= A for all probed m.
struct LacunarySequence {
  std::function<double(std::size_t)> rule;  // j >= 1
  double A = 0.0;
  double tail_eps = 0.0;

  double at(std::size_t j) const { return rule(j); }
};

LacunarySequence lacunary_certify(std::function<double(std::size_t)> rule,
                                  std::size_t probe_m, double tail_eps);

// Partial sum over j = 1..terms of max_{u_{j-1} <= v <= u_j}
// |int_{u_{j-1}}^{v} sin(t u)/u du|, with u_0 := 0.
double lm1_sum(double t, const LacunarySequence& seq, std::size_t terms);

// Same per-interval maxima, summed for j = m+1 .. m+terms.
double lm2_tail(double t, const LacunarySequence& seq, std::size_t m,
                std::size_t terms);

}  // namespace kpf
