#include "kpf/kp_transform.hpp"

#include <algorithm>
#include <cmath>

namespace kpf::kp {

namespace {

void check_offaxis(double xi, double eta) {
  if (xi == 0.0 || eta == 0.0)
    throw ValidationError("transform frequency on a coordinate axis");
}

LadderSummary summarize(const PringsheimLadder& lad) {
  LadderSummary s;
  s.rungs = lad.rung_count();
  s.converged = lad.converged;
  s.deltas = lad.deltas;
  s.last_delta = lad.deltas.empty() ? kInf : lad.deltas.back();
  return s;
}

double ladder_start_for(const BvFunction2& f) {
  double s = 1.0;
  for (double b : f.x_breaks) s = std::max(s, std::abs(b));
  for (double b : f.y_breaks) s = std::max(s, std::abs(b));
  if (f.support && f.support->compact())
    s = std::max({s, std::abs(f.support->x_lo), std::abs(f.support->x_hi),
                  std::abs(f.support->y_lo), std::abs(f.support->y_hi)});
  return s;
}

// Incremental 1D factor integrals for the separable path.
class FactorIntegrator {
 public:
  FactorIntegrator(std::function<double(double)> u, double omega,
                   std::vector<double> breaks, Exec mode)
      : u_(std::move(u)), omega_(omega), mode_(mode) {
    layout_.max_width = kPi / (2.0 * std::abs(omega));
    layout_.rel_width = 0.5;
    layout_.breaks = std::move(breaks);
  }

  cplx eval(double lo, double hi) {
    auto g = [this](double t) { return u_(t) * std::exp(cplx(0.0, -omega_ * t)); };
    if (!have_prev_) {
      sum_ = integrate_1d(g, lo, hi, layout_, mode_);
    } else {
      if (lo < lo_) sum_ += integrate_1d(g, lo, lo_, layout_, mode_);
      if (hi > hi_) sum_ += integrate_1d(g, hi_, hi, layout_, mode_);
    }
    lo_ = lo;
    hi_ = hi;
    have_prev_ = true;
    return sum_;
  }

 private:
  std::function<double(double)> u_;
  double omega_;
  Exec mode_;
  PanelLayout layout_;
  double lo_ = 0.0, hi_ = 0.0;
  bool have_prev_ = false;
  cplx sum_{0.0};
};

PringsheimResult from_ladder(const PringsheimLadder& lad) {
  PringsheimResult r;
  r.value = lad.value;
  r.ladder = summarize(lad);
  r.converged = lad.converged;
  return r;
}

}  // namespace

PringsheimResult kpft_direct(const BvFunction2& f, double xi, double eta,
                             const TransformOptions& opt) {
  check_offaxis(xi, eta);
  if (opt.route == Route::oracle) {
    if (!f.transform_oracle) throw ValidationError("no transform oracle attached");
    PringsheimResult r;
    r.value = f.transform_oracle->eval(xi, eta);
    r.converged = true;
    r.ladder.converged = true;
    return r;
  }
  if (opt.route == Route::stieltjes) return kpft_stieltjes(f, xi, eta, opt);
  if (!opt.assume_bv0) require_vanishing(f);

  LadderOptions lo;
  lo.tol = opt.tol;
  lo.factor = opt.ladder_factor;
  lo.confirm = opt.confirm;
  lo.max_rungs = opt.max_rungs;
  lo.start = ladder_start_for(f);
  lo.snap_x = kPi / std::abs(xi);
  lo.snap_y = kPi / std::abs(eta);

  const bool separable = !f.separable.empty() && !opt.force_generic;
  if (separable) {
    std::vector<FactorIntegrator> fx, fy;
    fx.reserve(f.separable.size());
    fy.reserve(f.separable.size());
    for (const auto& term : f.separable) {
      fx.emplace_back(term.u, xi, f.x_breaks, opt.mode);
      fy.emplace_back(term.v, eta, f.y_breaks, opt.mode);
    }
    auto window_value = [&](const Rect2& w, int) {
      cplx total = 0.0;
      for (std::size_t m = 0; m < fx.size(); ++m)
        total += fx[m].eval(w.x_lo, w.x_hi) * fy[m].eval(w.y_lo, w.y_hi);
      return total;
    };
    return from_ladder(run_ladder(window_value, lo));
  }

  PanelLayout lx, ly;
  const double cap = kPi / (2.0 * std::max(std::abs(xi), std::abs(eta)));
  lx.max_width = cap;
  lx.breaks = f.x_breaks;
  ly.max_width = cap;
  ly.breaks = f.y_breaks;
  auto g = [&f, xi, eta](double x, double y) {
    return f.eval(x, y) * std::exp(cplx(0.0, -(xi * x + eta * y)));
  };
  WindowAccumulator<decltype(g)> wi(g, lx, ly, opt.mode);
  auto window_value = [&](const Rect2& w, int) { return wi.eval(w); };
  return from_ladder(run_ladder(window_value, lo));
}

PringsheimResult kpft_stieltjes(const BvFunction2& f, double xi, double eta,
                                const TransformOptions& opt) {
  check_offaxis(xi, eta);
  if (!opt.assume_bv0) require_vanishing(f);

  rs::ImproperOptions io;
  // The RS value is scaled by 1/(xi eta); keep the final tolerance honest.
  io.tol = opt.tol * std::max(std::abs(xi * eta), 1e-2);
  io.ladder_factor = opt.ladder_factor;
  io.confirm = opt.confirm;
  io.max_rungs = opt.max_rungs;
  io.start = ladder_start_for(f);

  const PringsheimLadder lad = rs::rs_improper(exp_integrand(xi, eta), f, io);
  PringsheimResult r = from_ladder(lad);
  r.value = -lad.value / (xi * eta);
  return r;
}

TransformGrid kpft_grid(const BvFunction2& f,
                        const std::vector<std::pair<double, double>>& freqs,
                        double tol, Route route) {
  for (const auto& [xi, eta] : freqs) check_offaxis(xi, eta);

  TransformGrid grid;
  grid.frequencies = freqs;
  TransformOptions opt;
  opt.tol = tol;
  opt.route = route;
  for (const auto& [xi, eta] : freqs) {
    try {
      const PringsheimResult r = route == Route::stieltjes
                                     ? kpft_stieltjes(f, xi, eta, opt)
                                     : kpft_direct(f, xi, eta, opt);
      grid.values.push_back(r.value);
      grid.converged.push_back(r.converged);
      grid.failures.emplace_back();
    } catch (const std::exception& e) {
      grid.values.push_back(cplx{0.0});
      grid.converged.push_back(false);
      grid.failures.emplace_back(e.what());
    }
  }
  return grid;
}

ContinuityReport continuity_probe(const BvFunction2& f, double xi0, double eta0,
                                  const std::vector<double>& radii, double tol,
                                  const TransformOptions& opt) {
  check_offaxis(xi0, eta0);
  double rmax = 0.0;
  for (double r : radii) rmax = std::max(rmax, r);
  if (rmax >= std::abs(xi0) || rmax >= std::abs(eta0))
    throw ValidationError("probe ball crosses a coordinate axis");

  ContinuityReport rep;
  rep.xi0 = xi0;
  rep.eta0 = eta0;
  rep.radii = radii;
  rep.center = kpft_direct(f, xi0, eta0, opt).value;

  for (double r : radii) {
    double osc = 0.0;
    for (int k = 0; k < 8; ++k) {
      const double ang = kPi * static_cast<double>(k) / 4.0;
      const double xi = xi0 + r * std::cos(ang);
      const double eta = eta0 + r * std::sin(ang);
      const cplx v = kpft_direct(f, xi, eta, opt).value;
      osc = std::max(osc, std::abs(v - rep.center));
    }
    rep.oscillation.push_back(osc);
  }
  rep.nonincreasing = true;
  for (std::size_t k = 1; k < rep.oscillation.size(); ++k)
    if (rep.oscillation[k] > rep.oscillation[k - 1] + 1e-12) rep.nonincreasing = false;
  rep.below_tol = !rep.oscillation.empty() && rep.oscillation.back() < tol;
  return rep;
}

}  // namespace kpf::kp
