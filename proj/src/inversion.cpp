#include "kpf/inversion.hpp"

#include <algorithm>
#include <cmath>

#include "kpf/bv_core.hpp"
#include "kpf/quadrature.hpp"

namespace kpf::inv {

namespace {

constexpr double kFourPiSq = 4.0 * kPi * kPi;

// t-coordinates at which u(shift + t) inherits breaks of u.
std::vector<double> shifted_breaks(const std::vector<double>& breaks, double shift,
                                   bool negate) {
  std::vector<double> out;
  for (double b : breaks) out.push_back(negate ? shift - b : b - shift);
  return out;
}

// int_0^inf u(x + sgn * t) * w(t) dt with w = cos_window(alpha, beta, .).
// When the support cuts the half line, the integral is compact; otherwise
// half-period chunks with acceleration.
cplx kernel_half_line(const std::function<double(double)>& u, double x, int sgn,
                      const std::vector<double>& u_breaks,
                      std::optional<double> support_lo, std::optional<double> support_hi,
                      const KernelSpec& spec, double tol, Exec mode) {
  PanelLayout layout;
  layout.max_width = kPi / (2.0 * spec.beta);
  layout.rel_width = 0.5;
  layout.breaks = shifted_breaks(u_breaks, x, sgn < 0);

  auto g = [&u, x, sgn, &spec](double t) {
    return cplx(u(x + sgn * t) * cos_window(spec.alpha, spec.beta, t));
  };

  // u(x + sgn t) == 0 for t beyond the support in this direction.
  double t_max = kInf;
  if (sgn > 0 && support_hi) t_max = *support_hi - x;
  if (sgn < 0 && support_lo) t_max = x - *support_lo;
  if (t_max <= 0.0) return 0.0;
  if (std::isfinite(t_max)) return integrate_1d(g, 0.0, t_max + 1e-12, layout, mode);

  TailSumOptions opt;
  opt.tol = tol;
  opt.max_chunks = 400;
  const TailSum tail =
      improper_chunks(g, 0.0, kPi / spec.alpha, layout, opt, mode);
  return tail.value;
}

struct FactorState {
  cplx value{0.0};
  bool converged = true;
  int chunks = 0;
};

}  // namespace

QuadrantLimits quadrant_limits(const BvFunction2& f, double x, double y, double h0,
                               int levels, double tol) {
  if (auto meta = quadrant_limits_metadata(f, x, y))
    return {(*meta)[0], (*meta)[1], (*meta)[2], (*meta)[3]};

  const int sgns[4][2] = {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
  double lims[4];
  for (int q = 0; q < 4; ++q) {
    double h = h0;
    double prev = eval_checked(f, x + sgns[q][0] * h, y + sgns[q][1] * h);
    bool found = false;
    std::vector<double> deltas;
    for (int k = 1; k <= levels; ++k) {
      h *= 0.5;
      const double v = eval_checked(f, x + sgns[q][0] * h, y + sgns[q][1] * h);
      deltas.push_back(std::abs(v - prev));
      if (deltas.back() < tol * (1.0 + std::abs(v))) {
        lims[q] = v;
        found = true;
        break;
      }
      prev = v;
    }
    if (!found)
      throw ConvergenceError("quadrant limit not detected", std::move(deltas));
  }
  return {lims[0], lims[1], lims[2], lims[3]};
}

double kernel_form_inversion(const BvFunction2& f, double x, double y,
                             const AnnularRegion& region, const InversionOptions& opt) {
  if (!opt.assume_bv0) require_vanishing(f);
  const KernelSpec spec1{region.alpha1, region.beta1};
  const KernelSpec spec2{region.alpha2, region.beta2};

  const bool separable = !f.separable.empty() && !opt.force_generic;
  if (separable) {
    const double fac_tol = 0.2 * opt.tol;
    cplx total = 0.0;
    for (const auto& term : f.separable) {
      std::optional<double> sx_lo, sx_hi, sy_lo, sy_hi;
      if (f.support) {
        if (std::isfinite(f.support->x_lo)) sx_lo = f.support->x_lo;
        if (std::isfinite(f.support->x_hi)) sx_hi = f.support->x_hi;
        if (std::isfinite(f.support->y_lo)) sy_lo = f.support->y_lo;
        if (std::isfinite(f.support->y_hi)) sy_hi = f.support->y_hi;
      }
      const cplx ix =
          kernel_half_line(term.u, x, +1, f.x_breaks, sx_lo, sx_hi, spec1, fac_tol,
                           opt.mode) +
          kernel_half_line(term.u, x, -1, f.x_breaks, sx_lo, sx_hi, spec1, fac_tol,
                           opt.mode);
      const cplx iy =
          kernel_half_line(term.v, y, +1, f.y_breaks, sy_lo, sy_hi, spec2, fac_tol,
                           opt.mode) +
          kernel_half_line(term.v, y, -1, f.y_breaks, sy_lo, sy_hi, spec2, fac_tol,
                           opt.mode);
      total += ix * iy;
    }
    return total.real() / (kPi * kPi);
  }

  PanelLayout lx, ly;
  lx.max_width = kPi / (2.0 * spec1.beta);
  lx.breaks = shifted_breaks(f.x_breaks, x, false);
  ly.max_width = kPi / (2.0 * spec2.beta);
  ly.breaks = shifted_breaks(f.y_breaks, y, false);

  auto g = [&](double t1, double t2) {
    return cplx(f.eval(x + t1, y + t2) * cos_window(spec1.alpha, spec1.beta, t1) *
                cos_window(spec2.alpha, spec2.beta, t2));
  };
  WindowAccumulator<decltype(g)> acc(g, lx, ly, opt.mode);

  LadderOptions lo;
  lo.tol = opt.tol;
  lo.confirm = 3;
  lo.max_rungs = 24;
  lo.start = std::max(1.0, kPi / spec1.alpha);
  lo.snap_x = kPi / spec1.alpha;
  lo.snap_y = kPi / spec2.alpha;
  const PringsheimLadder lad =
      run_ladder([&](const Rect2& w, int) { return acc.eval(w); }, lo);
  return lad.value.real() / (kPi * kPi);
}

namespace {

// int over alpha <= |s| <= beta of fx(s) e^{i c s} ds.
cplx annulus_axis_integral(const std::function<cplx(double)>& fx, double c,
                           double alpha, double beta, Exec mode) {
  if (beta <= alpha) return 0.0;
  PanelLayout layout;
  layout.max_width = std::min(std::abs(c) > 1e-12 ? kPi / (2.0 * std::abs(c)) : kInf,
                              0.5);
  layout.rel_width = 0.25;
  auto g = [&](double s) {
    return fx(s) * std::exp(cplx(0.0, c * s)) +
           fx(-s) * std::exp(cplx(0.0, -c * s));
  };
  return integrate_1d(g, alpha, beta, layout, mode);
}

std::function<cplx(double, double)> transform_provider(const BvFunction2& f,
                                                       const InversionOptions& opt) {
  if (opt.transform_route == kp::Route::oracle) {
    if (!f.transform_oracle)
      throw ValidationError("frequency side requires a transform oracle for this route");
    return f.transform_oracle->eval;
  }
  kp::TransformOptions topt;
  topt.tol = 0.3 * opt.tol;
  topt.route = opt.transform_route;
  topt.assume_bv0 = true;  // probed once by the caller
  return [f, topt](double xi, double eta) {
    return topt.route == kp::Route::stieltjes
               ? kp::kpft_stieltjes(f, xi, eta, topt).value
               : kp::kpft_direct(f, xi, eta, topt).value;
  };
}

}  // namespace

FrequencySideResult frequency_side_inversion(const BvFunction2& f, double x, double y,
                                             const AnnularRegion& region,
                                             const InversionOptions& opt) {
  if (!opt.assume_bv0) require_vanishing(f);
  FrequencySideResult out;

  const bool factored = opt.transform_route == kp::Route::oracle &&
                        f.transform_oracle && f.transform_oracle->factored();
  if (factored) {
    const cplx ix = annulus_axis_integral(f.transform_oracle->factor_x, x,
                                          region.alpha1, region.beta1, opt.mode);
    const cplx iy = annulus_axis_integral(f.transform_oracle->factor_y, y,
                                          region.alpha2, region.beta2, opt.mode);
    out.raw = ix * iy / kFourPiSq;
  } else {
    const auto F = transform_provider(f, opt);
    auto g = [&](double xi, double eta) {
      return F(xi, eta) * std::exp(cplx(0.0, x * xi + y * eta));
    };
    PanelLayout lx, ly;
    lx.max_width =
        std::min(std::abs(x) > 1e-12 ? kPi / (2.0 * std::abs(x)) : kInf, 0.5);
    lx.rel_width = 0.25;
    ly.max_width =
        std::min(std::abs(y) > 1e-12 ? kPi / (2.0 * std::abs(y)) : kInf, 0.5);
    ly.rel_width = 0.25;
    cplx total = 0.0;
    const double sx[2] = {1.0, -1.0};
    for (double s1 : sx) {
      for (double s2 : sx) {
        const Rect2 rect{std::min(s1 * region.alpha1, s1 * region.beta1),
                         std::max(s1 * region.alpha1, s1 * region.beta1),
                         std::min(s2 * region.alpha2, s2 * region.beta2),
                         std::max(s2 * region.alpha2, s2 * region.beta2)};
        total += integrate_rect(g, rect, lx, ly, opt.mode);
      }
    }
    out.raw = total / kFourPiSq;
  }
  out.value = out.raw.real();
  out.imag_residual = std::abs(out.raw.imag());
  return out;
}

StudyResult inversion_study(const BvFunction2& f, double x, double y,
                            const std::vector<double>& alpha_ladder,
                            const std::vector<double>& beta_ladder,
                            const InversionOptions& opt, double pass_tol) {
  if (alpha_ladder.size() != beta_ladder.size() || alpha_ladder.empty())
    throw ValidationError("inversion_study: ladders must be nonempty and equal length");
  for (std::size_t s = 0; s < alpha_ladder.size(); ++s)
    if (!(alpha_ladder[s] < beta_ladder[s]))
      throw ValidationError("inversion_study: alpha < beta required per stage");

  StudyResult study;
  study.target = quadrant_limits(f, x, y).average();

  InversionOptions stage_opt = opt;
  if (!opt.assume_bv0) require_vanishing(f);
  stage_opt.assume_bv0 = true;

  for (std::size_t s = 0; s < alpha_ladder.size(); ++s) {
    const AnnularRegion region{alpha_ladder[s], alpha_ladder[s], beta_ladder[s],
                               beta_ladder[s]};
    InversionResult r;
    r.region = region;
    r.target = study.target;
    try {
      r.value = kernel_form_inversion(f, x, y, region, stage_opt);
      r.residual = std::abs(r.value - study.target);
    } catch (const std::exception& e) {
      r.ok = false;
      r.failure = e.what();
    }
    study.stages.push_back(std::move(r));
  }

  const std::size_t n = study.stages.size();
  bool pass = n >= 2 && study.stages[n - 1].ok && study.stages[n - 2].ok &&
              study.stages[n - 1].residual < pass_tol &&
              study.stages[n - 2].residual < pass_tol;
  if (pass && n >= 3) {
    pass = study.stages[n - 3].ok &&
           study.stages[n - 2].residual <= study.stages[n - 3].residual + 1e-12 &&
           study.stages[n - 1].residual <= study.stages[n - 2].residual + 1e-12;
  }
  study.pass = pass;
  return study;
}

BvFunction2 quadrant_sum_function(const BvFunction2& f, double x, double y) {
  BvFunction2 g;
  const auto base = f.eval;
  g.eval = [base, x, y](double t1, double t2) {
    return base(x - t1, y - t2) + base(x - t1, y + t2) + base(x + t1, y - t2) +
           base(x + t1, y + t2);
  };
  for (const auto& term : f.separable) {
    auto um = [u = term.u, x](double t) { return u(x - t); };
    auto up = [u = term.u, x](double t) { return u(x + t); };
    auto vm = [v = term.v, y](double t) { return v(y - t); };
    auto vp = [v = term.v, y](double t) { return v(y + t); };
    g.separable.push_back({um, vm});
    g.separable.push_back({um, vp});
    g.separable.push_back({up, vm});
    g.separable.push_back({up, vp});
  }
  g.x_breaks.push_back(0.0);
  for (double b : f.x_breaks) {
    g.x_breaks.push_back(b - x);
    g.x_breaks.push_back(x - b);
  }
  g.y_breaks.push_back(0.0);
  for (double b : f.y_breaks) {
    g.y_breaks.push_back(b - y);
    g.y_breaks.push_back(y - b);
  }
  if (f.known_variation) g.known_variation = 4.0 * *f.known_variation;
  g.bv0_certified = f.bv0_certified;
  return g;
}

namespace {

// iint_{[0,a]^2} g * h1(t1) h2(t2), h = dirichlet_window.
double pai_window_integral(const BvFunction2& g, double a, const KernelSpec& s1,
                           const KernelSpec& s2, Exec mode) {
  PanelLayout lx, ly;
  lx.max_width = kPi / (2.0 * s1.beta);
  lx.breaks = g.x_breaks;
  ly.max_width = kPi / (2.0 * s2.beta);
  ly.breaks = g.y_breaks;
  if (!g.separable.empty()) {
    cplx total = 0.0;
    for (const auto& term : g.separable) {
      const cplx ix = integrate_1d(
          [&](double t) { return cplx(term.u(t) * dirichlet_window(s1, t)); }, 0.0, a,
          lx, mode);
      const cplx iy = integrate_1d(
          [&](double t) { return cplx(term.v(t) * dirichlet_window(s2, t)); }, 0.0, a,
          ly, mode);
      total += ix * iy;
    }
    return total.real();
  }
  return integrate_rect(
             [&](double t1, double t2) {
               return cplx(g.eval(t1, t2) * dirichlet_window(s1, t1) *
                           dirichlet_window(s2, t2));
             },
             {0.0, a, 0.0, a}, lx, ly, mode)
      .real();
}

}  // namespace

PaiTailReport pai_uniform_tail(const BvFunction2& f, double x, double y, double a1,
                               double a2,
                               const std::vector<std::pair<KernelSpec, KernelSpec>>& specs,
                               double delta0, const InversionOptions& opt) {
  const double d0 = delta0 > 0.0 ? delta0 : a1;
  if (!(a2 > a1) || !(a1 >= d0))
    throw ValidationError("pai_uniform_tail requires a2 > a1 >= delta0");

  const BvFunction2 g = quadrant_sum_function(f, x, y);

  PaiTailReport rep;
  // Measured tail quantities: sup |g| past delta0 in the open quadrant, and
  // the two strip variations.
  double sup = 0.0;
  const double extent = 32.0 * d0;
  const int n = 48;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      const double t1 = extent * static_cast<double>(i) / n;
      const double t2 = extent * static_cast<double>(j) / n;
      if (std::hypot(t1, t2) <= d0) continue;
      sup = std::max(sup, std::abs(g.eval(t1, t2)));
    }
  }
  const double var1 = bv::vitali_variation(g, {d0, kInf, 0.0, kInf}, 1e-3).value;
  const double var2 = bv::vitali_variation(g, {0.0, kInf, d0, kInf}, 1e-3).value;
  rep.eps = std::max({sup, var1, var2});
  const double si_pi = si(kPi);
  rep.bound = 12.0 * si_pi * si_pi * rep.eps;

  for (const auto& [s1, s2] : specs) {
    PaiTailReport::Case c{s1, s2, 0.0, 0.0};
    const double i1 = pai_window_integral(g, a1, s1, s2, opt.mode);
    const double i2 = pai_window_integral(g, a2, s1, s2, opt.mode);
    c.difference = std::abs(i1 - i2);
    c.margin = rep.bound - c.difference;
    if (c.margin < 0.0) rep.all_within = false;
    rep.cases.push_back(c);
  }
  return rep;
}

namespace {

// Sampled max over u of |int_{alpha <= |s| <= u} fx e^{i c s} ds| on one
// lacunary block, built incrementally across the sample points.
double axis_block_max(const std::function<cplx(double)>& fx, double c,
                      const LacunarySequence& seq, std::size_t i,
                      std::size_t samples, Exec mode) {
  const double lo = seq.at(i - 1), hi = seq.at(i);
  cplx running = 0.0;
  double prev = lo;
  double best = 0.0;  // u = lo gives the empty region
  for (std::size_t s = 1; s < samples; ++s) {
    const double u = lo + (hi - lo) * static_cast<double>(s) /
                              static_cast<double>(samples - 1);
    running += annulus_axis_integral(fx, c, prev, u, mode);
    prev = u;
    best = std::max(best, std::abs(running));
  }
  return best;
}

double block_sup_impl(const BvFunction2& f, double x, double y,
                      const LacunarySequence& seq1, const LacunarySequence& seq2,
                      std::size_t i, std::size_t j, std::size_t samples,
                      const InversionOptions& opt) {
  if (i < 2 || j < 2) throw ValidationError("moricz blocks start at i, j >= 2");
  if (samples < 2) throw ValidationError("moricz sampling needs samples >= 2");

  const bool factored = opt.transform_route == kp::Route::oracle &&
                        f.transform_oracle && f.transform_oracle->factored();
  if (factored) {
    const double mx =
        axis_block_max(f.transform_oracle->factor_x, x, seq1, i, samples, opt.mode);
    const double my =
        axis_block_max(f.transform_oracle->factor_y, y, seq2, j, samples, opt.mode);
    return mx * my / kFourPiSq;
  }

  InversionOptions fopt = opt;
  fopt.assume_bv0 = true;
  double best = 0.0;
  for (std::size_t su = 1; su < samples; ++su) {
    const double u = seq1.at(i - 1) + (seq1.at(i) - seq1.at(i - 1)) *
                                          static_cast<double>(su) /
                                          static_cast<double>(samples - 1);
    for (std::size_t sv = 1; sv < samples; ++sv) {
      const double v = seq2.at(j - 1) + (seq2.at(j) - seq2.at(j - 1)) *
                                            static_cast<double>(sv) /
                                            static_cast<double>(samples - 1);
      const AnnularRegion region{seq1.at(i - 1), seq2.at(j - 1), u, v};
      const FrequencySideResult r = frequency_side_inversion(f, x, y, region, fopt);
      best = std::max(best, std::abs(r.raw));
    }
  }
  return best;
}

}  // namespace

double moricz_block_sup(const BvFunction2& f, double x, double y,
                        const LacunarySequence& seq1, const LacunarySequence& seq2,
                        std::size_t i, std::size_t j, std::size_t samples,
                        const InversionOptions& opt) {
  return block_sup_impl(f, x, y, seq1, seq2, i, j, samples, opt);
}

double MoriczSeries::tail(std::size_t n0, std::size_t m0) const {
  CompensatedSum acc;
  for (std::size_t i = 2; i <= n; ++i)
    for (std::size_t j = 2; j <= m; ++j)
      if (i > n0 || j > m0) acc.add(block(i, j));
  return acc.value();
}

MoriczSeries moricz_series(const BvFunction2& f, double x, double y,
                           const LacunarySequence& seq1, const LacunarySequence& seq2,
                           std::size_t n, std::size_t m, std::size_t samples,
                           const InversionOptions& opt) {
  if (n < 2 || m < 2) throw ValidationError("moricz_series needs N, M >= 2");
  MoriczSeries out;
  out.n = n;
  out.m = m;
  out.blocks.assign((n - 1) * (m - 1), 0.0);

  CompensatedSum acc;
  for (std::size_t i = 2; i <= n; ++i) {
    for (std::size_t j = 2; j <= m; ++j) {
      const double b = block_sup_impl(f, x, y, seq1, seq2, i, j, samples, opt);
      out.blocks[(i - 2) * (m - 1) + (j - 2)] = b;
      acc.add(b);
    }
  }
  out.partial_sum = acc.value();

  const double var =
      f.known_variation ? *f.known_variation
                        : bv::vitali_variation(f, Rect2::plane(), 1e-3).value;
  out.bound = (3.0 * seq1.A + 4.0) * (3.0 * seq2.A + 4.0) / (kPi * kPi) * var;
  return out;
}

UniformityReport uniformity_scan(const BvFunction2& f, double cx, double cy,
                                 double radius, std::size_t grid,
                                 const RegionLadder& ladder,
                                 const InversionOptions& opt) {
  if (grid < 1) throw ValidationError("uniformity_scan: grid >= 1");
  UniformityReport rep;
  rep.max_residual_per_stage.assign(ladder.alphas.size(), 0.0);

  for (std::size_t a = 0; a < grid; ++a) {
    for (std::size_t b = 0; b < grid; ++b) {
      const double x =
          grid == 1 ? cx
                    : cx - radius + 2.0 * radius * static_cast<double>(a) /
                                        static_cast<double>(grid - 1);
      const double y =
          grid == 1 ? cy
                    : cy - radius + 2.0 * radius * static_cast<double>(b) /
                                        static_cast<double>(grid - 1);
      rep.points.push_back({x, y});
      try {
        const StudyResult study =
            inversion_study(f, x, y, ladder.alphas, ladder.betas, opt);
        std::vector<double> res;
        for (std::size_t s = 0; s < study.stages.size(); ++s) {
          res.push_back(study.stages[s].residual);
          rep.max_residual_per_stage[s] =
              std::max(rep.max_residual_per_stage[s], study.stages[s].residual);
        }
        rep.residuals.push_back(std::move(res));
        rep.failures.emplace_back();
      } catch (const std::exception& e) {
        rep.residuals.emplace_back();
        rep.failures.emplace_back(e.what());
      }
    }
  }
  return rep;
}

}  // namespace kpf::inv
