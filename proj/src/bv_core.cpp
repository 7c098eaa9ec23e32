#include "kpf/bv_core.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace kpf::bv {

namespace {

constexpr std::size_t kCellBudget = std::size_t(1) << 22;

double clamp_finite(double v, double lim) { return std::max(-lim, std::min(lim, v)); }

// Window of a possibly unbounded rectangle at half-width w.
Rect2 window_of(const Rect2& rect, double w) {
  return {std::max(rect.x_lo, -w), std::min(rect.x_hi, w),
          std::max(rect.y_lo, -w), std::min(rect.y_hi, w)};
}

std::vector<double> initial_cuts(double a, double b, const std::vector<double>& breaks,
                                 std::size_t min_cells) {
  return build_cuts(a, b, breaks, (b - a) / static_cast<double>(min_cells));
}

}  // namespace

double grid_abs_cell_sum(const BvFunction2& f, const std::vector<double>& xs,
                         const std::vector<double>& ys, Exec mode) {
  const std::size_t nx = xs.size() - 1;
  const std::size_t ny = ys.size() - 1;
  ErrorSlot errors;
  const double total = indexed_sum(
      ny,
      [&](std::size_t j) {
        const double ylo = ys[j], yhi = ys[j + 1];
        CompensatedSum row;
        double f_lo_prev = f.eval(xs[0], ylo);
        double f_hi_prev = f.eval(xs[0], yhi);
        if (!std::isfinite(f_lo_prev)) errors.report(xs[0], ylo);
        if (!std::isfinite(f_hi_prev)) errors.report(xs[0], yhi);
        for (std::size_t i = 0; i < nx; ++i) {
          const double f_lo = f.eval(xs[i + 1], ylo);
          const double f_hi = f.eval(xs[i + 1], yhi);
          if (!std::isfinite(f_lo)) errors.report(xs[i + 1], ylo);
          if (!std::isfinite(f_hi)) errors.report(xs[i + 1], yhi);
          row.add(std::abs(f_hi - f_hi_prev - f_lo + f_lo_prev));
          f_lo_prev = f_lo;
          f_hi_prev = f_hi;
        }
        return row.value();
      },
      mode);
  errors.raise_if_bad();
  return total;
}

double mixed_difference(const BvFunction2& f, const Rect2& rect) {
  validate_compact(rect);
  const double fac = eval_checked(f, rect.x_lo, rect.y_lo);
  const double fbc = eval_checked(f, rect.x_hi, rect.y_lo);
  const double fad = eval_checked(f, rect.x_lo, rect.y_hi);
  const double fbd = eval_checked(f, rect.x_hi, rect.y_hi);
  return corner_difference(fad, fbd, fac, fbc);
}

namespace {

// Nested dyadic refinement of the |mixed difference| sum on a compact window.
VariationEstimate vitali_compact(const BvFunction2& f, const Rect2& rect, double tol,
                                 int max_levels, std::size_t min_cells = 8) {
  validate_compact(rect);
  std::vector<double> xs = initial_cuts(rect.x_lo, rect.x_hi, f.x_breaks, min_cells);
  std::vector<double> ys = initial_cuts(rect.y_lo, rect.y_hi, f.y_breaks, min_cells);

  VariationEstimate est;
  double prev = -1.0;
  int ok_streak = 0;
  for (int level = 0; level <= max_levels; ++level) {
    const double value = grid_abs_cell_sum(f, xs, ys);
    est.level_values.push_back(value);
    est.value = std::max(est.value, value);
    est.refinement_levels = level;
    {
      double dx = 0.0, dy = 0.0;
      for (std::size_t i = 0; i + 1 < xs.size(); ++i) dx = std::max(dx, xs[i + 1] - xs[i]);
      for (std::size_t j = 0; j + 1 < ys.size(); ++j) dy = std::max(dy, ys[j + 1] - ys[j]);
      est.partition_norm = std::hypot(dx, dy);
    }
    if (prev >= 0.0 &&
        std::abs(value - prev) <= tol * std::max(std::abs(value), 1e-300)) {
      // Two quiet levels guard against refinement plateaus at extrema that
      // sit just past a cut.
      if (++ok_streak >= 2) return est;
    } else {
      ok_streak = 0;
    }
    prev = value;
    if (level == max_levels) break;
    if ((xs.size() - 1) * (ys.size() - 1) * 4 > kCellBudget) {
      est.diagnostic = "refinement budget exhausted before stabilization";
      return est;
    }
    auto split = [](std::vector<double>& cuts) {
      std::vector<double> out;
      out.reserve(cuts.size() * 2);
      for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        out.push_back(cuts[i]);
        out.push_back(0.5 * (cuts[i] + cuts[i + 1]));
      }
      out.push_back(cuts.back());
      cuts = std::move(out);
    };
    split(xs);
    split(ys);
  }
  // Growth without stabilization reads as unbounded variation.
  const std::size_t n = est.level_values.size();
  if (n >= 3 && est.level_values[n - 1] > 1.5 * est.level_values[0] &&
      est.level_values[n - 1] > est.level_values[n - 2] &&
      est.level_values[n - 2] > est.level_values[n - 3]) {
    est.diagnostic = "variation appears unbounded";
  } else if (est.diagnostic.empty()) {
    est.diagnostic = "did not stabilize within max_levels";
  }
  return est;
}

}  // namespace

VariationEstimate vitali_variation(const BvFunction2& f, const Rect2& rect, double tol,
                                   int max_levels) {
  if (!(tol > 0.0)) throw ValidationError("vitali_variation: tol > 0");
  validate(rect);
  if (rect.compact()) return vitali_compact(f, rect, tol, max_levels);

  // Compact-window ladder for unbounded rectangles. The support box (padded so
  // boundary jumps stay inside) bounds the useful window.
  Rect2 roi = rect;
  if (f.support) {
    roi.x_lo = std::max(roi.x_lo, f.support->x_lo - 1.0);
    roi.x_hi = std::min(roi.x_hi, f.support->x_hi + 1.0);
    roi.y_lo = std::max(roi.y_lo, f.support->y_lo - 1.0);
    roi.y_hi = std::min(roi.y_hi, f.support->y_hi + 1.0);
  }
  if (!(roi.x_lo < roi.x_hi) || !(roi.y_lo < roi.y_hi)) {
    // The rectangle misses the support entirely.
    VariationEstimate zero;
    zero.level_values.push_back(0.0);
    return zero;
  }
  double w = 2.0;
  for (double b : f.x_breaks) w = std::max(w, 2.0 * std::abs(b));
  for (double b : f.y_breaks) w = std::max(w, 2.0 * std::abs(b));
  for (double b : {roi.x_lo, roi.x_hi, roi.y_lo, roi.y_hi})
    if (std::isfinite(b)) w = std::max(w, 2.0 * std::abs(b) + 1.0);

  VariationEstimate est;
  double prev = -1.0;
  constexpr int kMaxWindows = 16;
  for (int k = 0; k <= kMaxWindows; ++k) {
    const Rect2 win = window_of(roi, w);
    VariationEstimate inner = vitali_compact(f, win, tol, max_levels);
    est.value = std::max(est.value, inner.value);
    est.partition_norm = inner.partition_norm;
    est.refinement_levels = std::max(est.refinement_levels, inner.refinement_levels);
    est.level_values.push_back(inner.value);
    if (!inner.clean()) {
      est.diagnostic = inner.diagnostic;
      return est;
    }
    const bool clipped_x = win.x_lo > roi.x_lo || win.x_hi < roi.x_hi;
    const bool clipped_y = win.y_lo > roi.y_lo || win.y_hi < roi.y_hi;
    if (!clipped_x && !clipped_y) return est;  // window saturated the region
    if (prev >= 0.0 &&
        std::abs(inner.value - prev) <= tol * std::max(std::abs(inner.value), 1e-300))
      return est;
    prev = inner.value;
    w *= 2.0;
  }
  est.diagnostic = "window ladder did not stabilize";
  return est;
}

VariationEstimate variation_1d(const std::function<double(double)>& f, double a,
                               double b, double tol, const std::vector<double>& breaks,
                               int max_levels) {
  if (!(a < b)) throw ValidationError("variation_1d: empty interval");
  std::vector<double> xs = build_cuts(a, b, breaks, (b - a) / 16.0);
  VariationEstimate est;
  double prev = -1.0;
  int ok_streak = 0;
  for (int level = 0; level <= max_levels; ++level) {
    CompensatedSum acc;
    double last = f(xs[0]);
    for (std::size_t i = 1; i < xs.size(); ++i) {
      const double v = f(xs[i]);
      acc.add(std::abs(v - last));
      last = v;
    }
    const double value = acc.value();
    est.level_values.push_back(value);
    est.value = std::max(est.value, value);
    est.refinement_levels = level;
    double dx = 0.0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) dx = std::max(dx, xs[i + 1] - xs[i]);
    est.partition_norm = dx;
    if (prev >= 0.0 &&
        std::abs(value - prev) <= tol * std::max(std::abs(value), 1e-300)) {
      if (++ok_streak >= 2) return est;
    } else {
      ok_streak = 0;
    }
    prev = value;
    if (level == max_levels || xs.size() > (std::size_t(1) << 20)) break;
    std::vector<double> out;
    out.reserve(xs.size() * 2);
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
      out.push_back(xs[i]);
      out.push_back(0.5 * (xs[i] + xs[i + 1]));
    }
    out.push_back(xs.back());
    xs = std::move(out);
  }
  est.diagnostic = "did not stabilize within max_levels";
  return est;
}

HardyVariation hardy_variation(const BvFunction2& f, const Rect2& rect, double tol,
                               std::optional<double> anchor_x,
                               std::optional<double> anchor_y) {
  validate(rect);
  HardyVariation h;
  h.vitali = vitali_variation(f, rect, tol);

  const double lim = 64.0;
  const double ax = anchor_x.value_or(
      rect.compact() ? 0.5 * (rect.x_lo + rect.x_hi)
                     : 0.5 * (clamp_finite(rect.x_lo, lim) + clamp_finite(rect.x_hi, lim)));
  const double ay = anchor_y.value_or(
      rect.compact() ? 0.5 * (rect.y_lo + rect.y_hi)
                     : 0.5 * (clamp_finite(rect.y_lo, lim) + clamp_finite(rect.y_hi, lim)));

  const double xlo = clamp_finite(rect.x_lo, 512.0), xhi = clamp_finite(rect.x_hi, 512.0);
  const double ylo = clamp_finite(rect.y_lo, 512.0), yhi = clamp_finite(rect.y_hi, 512.0);
  h.section_x = variation_1d([&](double x) { return f.eval(x, ay); }, xlo, xhi, tol,
                             f.x_breaks);
  h.section_y = variation_1d([&](double y) { return f.eval(ax, y); }, ylo, yhi, tol,
                             f.y_breaks);
  return h;
}

TailVariation tail_variation(const BvFunction2& f, double m, double tol) {
  if (!(m > 0.0)) throw ValidationError("tail_variation: m > 0");
  TailVariation t;
  t.x_pos = vitali_variation(f, {m, kInf, -kInf, kInf}, tol).value;
  t.x_neg = vitali_variation(f, {-kInf, -m, -kInf, kInf}, tol).value;
  t.y_pos = vitali_variation(f, {-kInf, kInf, m, kInf}, tol).value;
  t.y_neg = vitali_variation(f, {-kInf, kInf, -kInf, -m}, tol).value;
  return t;
}

double total_variation_function(const BvFunction2& f, double t1, double t2, double tol) {
  // The y side is half-open; nudge the top edge below t2 so a jump exactly on
  // the line y = t2 is excluded.
  const double delta = 1e-9 * (1.0 + std::abs(t2));
  return vitali_variation(f, {-kInf, t1, -kInf, t2 - delta}, tol).value;
}

VariationMeasure variation_measure(const BvFunction2& f, const GridPartition& grid,
                                   double tol) {
  VariationMeasure vm;
  vm.grid = grid;
  const std::size_t nx = grid.nx(), ny = grid.ny();
  vm.masses.assign(nx * ny, 0.0);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 4)
#endif
  for (long long c = 0; c < static_cast<long long>(nx * ny); ++c) {
    const std::size_t i = static_cast<std::size_t>(c) % nx;
    const std::size_t j = static_cast<std::size_t>(c) / nx;
    VariationEstimate cell = vitali_compact(f, grid.cell(i, j), tol, 8, 2);
    vm.masses[static_cast<std::size_t>(c)] = cell.value;
  }
  CompensatedSum total;
  for (double mass : vm.masses) total.add(mass);
  vm.total = total.value();
  return vm;
}

DiagnosticsReport bv_zero_diagnostics(const BvFunction2& f,
                                      const std::vector<double>& probe_radii,
                                      std::size_t sample_grid) {
  DiagnosticsReport report;
  if (probe_radii.empty()) return report;
  const double r0 = probe_radii.front();
  const double coarse_tol = 0.02;

  // Lemma-style tail bounds depend only on one coordinate; cache them.
  std::map<double, double> var_xpos, var_xneg, var_ypos, var_yneg;
  auto halfplane = [&](std::map<double, double>& cache, auto rect_of, double c) {
    auto it = cache.find(c);
    if (it != cache.end()) return it->second;
    const double v = vitali_variation(f, rect_of(c), coarse_tol, 8).value;
    cache.emplace(c, v);
    return v;
  };

  const double span = r0;
  for (std::size_t a = 0; a < sample_grid; ++a) {
    for (std::size_t b = 0; b < sample_grid; ++b) {
      const double x = -span + 2.0 * span * (static_cast<double>(a) + 0.5) /
                                   static_cast<double>(sample_grid);
      const double y = -span + 2.0 * span * (static_cast<double>(b) + 0.5) /
                                   static_cast<double>(sample_grid);
      const double fav = std::abs(eval_checked(f, x, y));
      const double bounds[4] = {
          halfplane(var_xpos, [](double c) { return Rect2{c, kInf, -kInf, kInf}; }, x),
          halfplane(var_xneg, [](double c) { return Rect2{-kInf, c, -kInf, kInf}; }, x),
          halfplane(var_ypos, [](double c) { return Rect2{-kInf, kInf, c, kInf}; }, y),
          halfplane(var_yneg, [](double c) { return Rect2{-kInf, kInf, -kInf, c}; }, y)};
      static const char* names[4] = {"tail-bound-x+", "tail-bound-x-",
                                     "tail-bound-y+", "tail-bound-y-"};
      for (int q = 0; q < 4; ++q) {
        ++report.checks;
        // The variation estimate is a lower bound; allow estimator slack.
        const double rhs = bounds[q] * 1.1 + 1e-6;
        if (fav > rhs)
          report.violations.push_back({names[q], x, y, fav, bounds[q]});
      }
    }
  }

  // Sectional limits along the radius ladder (Theorem-style vanishing).
  const double probes[3] = {-0.5 * span, 0.0, 0.5 * span};
  for (double c : probes) {
    double first_x = 0.0, last_x = 0.0, first_y = 0.0, last_y = 0.0;
    for (std::size_t k = 0; k < probe_radii.size(); ++k) {
      const double r = probe_radii[k];
      const double vx = std::max(std::abs(eval_checked(f, c, r)),
                                 std::abs(eval_checked(f, c, -r)));
      const double vy = std::max(std::abs(eval_checked(f, r, c)),
                                 std::abs(eval_checked(f, -r, c)));
      if (k == 0) {
        first_x = vx;
        first_y = vy;
      }
      last_x = vx;
      last_y = vy;
    }
    ++report.checks;
    if (last_x > std::max(1e-4, 0.25 * first_x))
      report.violations.push_back({"sectional-limit-y", c, probe_radii.back(), last_x,
                                   std::max(1e-4, 0.25 * first_x)});
    ++report.checks;
    if (last_y > std::max(1e-4, 0.25 * first_y))
      report.violations.push_back({"sectional-limit-x", probe_radii.back(), c, last_y,
                                   std::max(1e-4, 0.25 * first_y)});
  }
  return report;
}

}  // namespace kpf::bv
