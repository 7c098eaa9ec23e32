#include "kpf/osc_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kpf/quadrature.hpp"

namespace kpf {

namespace {

double sinc(double t) {
  if (std::abs(t) < 1e-8) return 1.0 - t * t / 6.0;
  return std::sin(t) / t;
}

// Composite GL8 with panel width 0.5 is far below 1e-12 for sin t / t.
double si_panels(double x) {
  const double sign = x < 0.0 ? -1.0 : 1.0;
  const double b = std::abs(x);
  if (b == 0.0) return 0.0;
  const auto n = static_cast<std::size_t>(std::ceil(b / 0.5));
  CompensatedSum acc;
  for (std::size_t p = 0; p < n; ++p) {
    const double lo = b * static_cast<double>(p) / static_cast<double>(n);
    const double hi = b * static_cast<double>(p + 1) / static_cast<double>(n);
    acc.add(gl8([](double t) { return sinc(t); }, lo, hi).real());
  }
  return sign * acc.value();
}

// Si(x) = pi/2 - cos(x) f(x) - sin(x) g(x) with the divergent series summed
// to its smallest term; for x >= 50 that term is ~1e-21.
double si_asymptotic(double x) {
  const double inv2 = 1.0 / (x * x);
  double f = 0.0, g = 0.0;
  double term = 1.0 / x;  // (2k)! / x^{2k+1}
  double sign = 1.0;
  for (int k = 0; k < 60; ++k) {
    f += sign * term;
    const double gterm = term * static_cast<double>(2 * k + 1) / x;
    g += sign * gterm;
    const double next = term * static_cast<double>((2 * k + 1) * (2 * k + 2)) * inv2;
    if (next >= term) break;
    term = next;
    sign = -sign;
  }
  return kPi / 2.0 - std::cos(x) * f - std::sin(x) * g;
}

}  // namespace

double si(double x) {
  if (x < 0.0) return -si(-x);
  if (x <= 50.0) return si_panels(x);
  return si_asymptotic(x);
}

double cos_window(double u1, double u2, double t) {
  if (!(u1 < u2)) throw ValidationError("cos_window requires u1 < u2");
  const double tau0 = 1e-3 * std::min(1.0, 1.0 / std::max(std::abs(u1), std::abs(u2)));
  if (std::abs(t) < tau0) {
    const double u1_3 = u1 * u1 * u1, u2_3 = u2 * u2 * u2;
    const double u1_5 = u1_3 * u1 * u1, u2_5 = u2_3 * u2 * u2;
    return (u2 - u1) - t * t * (u2_3 - u1_3) / 6.0 +
           t * t * t * t * (u2_5 - u1_5) / 120.0;
  }
  return (std::sin(u2 * t) - std::sin(u1 * t)) / t;
}

double dirichlet_window(const KernelSpec& spec, double t) {
  return cos_window(spec.alpha, spec.beta, t) / kPi;
}

double sin_window_primitive(const KernelSpec& spec, double z) {
  return (si(spec.beta * z) - si(spec.alpha * z)) / kPi;
}

LacunarySequence lacunary_certify(std::function<double(std::size_t)> rule,
                                  std::size_t probe_m, double tail_eps) {
  if (probe_m < 1) throw ValidationError("lacunary_certify: probe_m >= 1");
  if (!(tail_eps > 0.0)) throw ValidationError("lacunary_certify: tail_eps > 0");

  constexpr std::size_t kTermBudget = 100000;
  constexpr double kDivergenceCap = 1e6;

  double prev = 0.0;
  for (std::size_t j = 1; j <= probe_m; ++j) {
    const double uj = rule(j);
    if (!(uj > 0.0) || !(uj > prev))
      throw ValidationError("lacunary rule must be positive and increasing");
    prev = uj;
  }

  double A = 0.0;
  for (std::size_t m = 1; m <= probe_m; ++m) {
    const double um = rule(m);
    double sum = 0.0;
    bool summable = false;
    for (std::size_t j = m; j < m + kTermBudget; ++j) {
      const double term = 1.0 / rule(j);
      sum += term;
      if (um * sum > kDivergenceCap)
        throw ValidationError("not in (L): partial sum exceeds divergence cap");
      if (term < tail_eps * sum) {
        summable = true;
        break;
      }
    }
    if (!summable)
      throw ValidationError("not in (L): tail not summable within term budget");
    A = std::max(A, um * sum);
  }

  LacunarySequence seq;
  seq.rule = std::move(rule);
  seq.A = A;
  seq.tail_eps = tail_eps;
  return seq;
}

namespace {

// max over v in [lo, hi] of |Si(|t| v) - Si(|t| lo)|. The max of Si over a
// range sits at the first odd multiple of pi past the left end (maxima of Si
// decrease), the min at the first even multiple (minima increase), so four
// candidates suffice.
double interval_max(double abst, double lo, double hi) {
  const double z0 = abst * lo, z1 = abst * hi;
  const double base = si(z0);
  double best = std::abs(si(z1) - base);
  double k = std::ceil(z0 / kPi - 1e-12);
  if (k < 1.0) k = 1.0;
  for (int c = 0; c < 2; ++c, k += 1.0) {
    const double z = k * kPi;
    if (z <= z0 || z >= z1) continue;
    best = std::max(best, std::abs(si(z) - base));
  }
  return best;
}

}  // namespace

double lm1_sum(double t, const LacunarySequence& seq, std::size_t terms) {
  if (t == 0.0) throw ValidationError("lm1_sum: t must be nonzero");
  const double abst = std::abs(t);
  CompensatedSum acc;
  double prev = 0.0;  // u_0 := 0
  for (std::size_t j = 1; j <= terms; ++j) {
    const double uj = seq.at(j);
    acc.add(interval_max(abst, prev, uj));
    prev = uj;
  }
  return acc.value();
}

double lm2_tail(double t, const LacunarySequence& seq, std::size_t m,
                std::size_t terms) {
  if (t == 0.0) throw ValidationError("lm2_tail: t must be nonzero");
  if (m < 1) throw ValidationError("lm2_tail: m >= 1");
  const double abst = std::abs(t);
  CompensatedSum acc;
  double prev = seq.at(m);
  for (std::size_t j = m + 1; j <= m + terms; ++j) {
    const double uj = seq.at(j);
    acc.add(interval_max(abst, prev, uj));
    prev = uj;
  }
  return acc.value();
}

}  // namespace kpf
