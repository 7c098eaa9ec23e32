#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "kpf/geometry.hpp"
#include "kpf/reduce.hpp"

namespace kpf {

// 8-point Gauss-Legendre rule on [-1, 1].
inline constexpr double kGl8Nodes[4] = {
    0.18343464249564980494, 0.52553240991632898582,
    0.79666647741362673959, 0.96028985649753623168};
inline constexpr double kGl8Weights[4] = {
    0.36268378337836198297, 0.31370664587788728734,
    0.22238103445337447054, 0.10122853629037625915};

template <class G>
cplx gl8(G&& g, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  cplx acc = 0.0;
  for (int k = 0; k < 4; ++k) {
    const double dx = half * kGl8Nodes[k];
    acc += kGl8Weights[k] * (cplx(g(mid - dx)) + cplx(g(mid + dx)));
  }
  return half * acc;
}

// Panel layout for one axis: mandatory interior edges at breaks, optional
// geometric grading into each break, a hard width cap, and an optional
// relative cap (panels near |t| may grow like rel_width * |t|).
struct PanelLayout {
  double max_width = kInf;
  double rel_width = 0.0;
  std::vector<double> breaks;
  double grade_hmin = 0.0;
  double grade_span = 1.0;

  PanelLayout with_shift(double s) const;  // layout for t -> t + s reparametrization
};

std::vector<double> panel_edges(double a, double b, const PanelLayout& layout);

template <class G>
cplx integrate_edges(G&& g, const std::vector<double>& edges,
                     Exec mode = default_exec()) {
  const std::size_t n = edges.size() - 1;
  return indexed_sum_cplx(n, [&](std::size_t p) { return gl8(g, edges[p], edges[p + 1]); },
                          mode);
}

template <class G>
cplx integrate_1d(G&& g, double a, double b, const PanelLayout& layout,
                  Exec mode = default_exec()) {
  return integrate_edges(g, panel_edges(a, b, layout), mode);
}

// Tensor-product panel quadrature over a compact rectangle.
template <class G2>
cplx integrate_rect(G2&& g, const Rect2& r, const PanelLayout& lx,
                    const PanelLayout& ly, Exec mode = default_exec()) {
  validate_compact(r);
  const std::vector<double> ex = panel_edges(r.x_lo, r.x_hi, lx);
  const std::vector<double> ey = panel_edges(r.y_lo, r.y_hi, ly);
  const std::size_t npx = ex.size() - 1, npy = ey.size() - 1;
  return indexed_sum_cplx(
      npx * npy,
      [&](std::size_t idx) {
        const std::size_t px = idx % npx, py = idx / npx;
        const double xm = 0.5 * (ex[px] + ex[px + 1]);
        const double xh = 0.5 * (ex[px + 1] - ex[px]);
        const double ym = 0.5 * (ey[py] + ey[py + 1]);
        const double yh = 0.5 * (ey[py + 1] - ey[py]);
        cplx acc = 0.0;
        for (int i = 0; i < 4; ++i) {
          const double dx = xh * kGl8Nodes[i];
          for (int j = 0; j < 4; ++j) {
            const double dy = yh * kGl8Nodes[j];
            const double w = kGl8Weights[i] * kGl8Weights[j];
            acc += w * (cplx(g(xm - dx, ym - dy)) + cplx(g(xm - dx, ym + dy)) +
                        cplx(g(xm + dx, ym - dy)) + cplx(g(xm + dx, ym + dy)));
          }
        }
        return xh * yh * acc;
      },
      mode);
}

// Incremental expanding-window integrator: each window evaluation adds only
// the slab panels around the previous (nested) window.
template <class G2>
class WindowAccumulator {
 public:
  WindowAccumulator(G2 g, PanelLayout lx, PanelLayout ly, Exec mode)
      : g_(std::move(g)), lx_(std::move(lx)), ly_(std::move(ly)), mode_(mode) {}

  cplx eval(const Rect2& w) {
    if (!have_prev_) {
      sum_ = integrate_rect(g_, w, lx_, ly_, mode_);
    } else {
      const Rect2 p = prev_;
      if (w.x_lo < p.x_lo)
        sum_ += integrate_rect(g_, {w.x_lo, p.x_lo, w.y_lo, w.y_hi}, lx_, ly_, mode_);
      if (w.x_hi > p.x_hi)
        sum_ += integrate_rect(g_, {p.x_hi, w.x_hi, w.y_lo, w.y_hi}, lx_, ly_, mode_);
      if (w.y_lo < p.y_lo)
        sum_ += integrate_rect(g_, {p.x_lo, p.x_hi, w.y_lo, p.y_lo}, lx_, ly_, mode_);
      if (w.y_hi > p.y_hi)
        sum_ += integrate_rect(g_, {p.x_lo, p.x_hi, p.y_hi, w.y_hi}, lx_, ly_, mode_);
    }
    prev_ = w;
    have_prev_ = true;
    return sum_;
  }

 private:
  G2 g_;
  PanelLayout lx_, ly_;
  Exec mode_;
  Rect2 prev_{};
  bool have_prev_ = false;
  cplx sum_{0.0};
};

// Iterated-averaging accelerator for a sequence of partial values whose tail
// alternates or decays (van Wijngaarden style). Feed partials in order; head()
// is the current extrapolation.
class SeqAccel {
 public:
  explicit SeqAccel(int max_table = 24) : max_table_(max_table) {}

  void push(cplx partial);
  cplx head() const { return table_.empty() ? cplx{0.0} : table_.front(); }
  double last_change() const { return last_change_; }
  int count() const { return count_; }

 private:
  std::vector<cplx> table_;
  int max_table_;
  int count_ = 0;
  double last_change_ = kInf;
};

// Improper integral of g over [a, +inf) by fixed-length chunks with
// acceleration. chunk is typically a half period of the dominant oscillation.
struct TailSumOptions {
  double tol = 1e-10;
  int max_chunks = 4000;
  int min_chunks = 6;
  int confirm = 2;
};

struct TailSum {
  cplx value{0.0};
  bool converged = false;
  int chunks = 0;
  double est_error = kInf;
};

template <class G>
TailSum improper_chunks(G&& g, double a, double chunk, const PanelLayout& layout,
                        const TailSumOptions& opt = {}, Exec mode = default_exec()) {
  SeqAccel accel;
  CompensatedSum re, im;
  TailSum out;
  int ok_streak = 0;
  for (int m = 1; m <= opt.max_chunks; ++m) {
    const double lo = a + chunk * (m - 1);
    const double hi = a + chunk * m;
    const cplx piece = integrate_1d(g, lo, hi, layout, mode);
    re.add(piece.real());
    im.add(piece.imag());
    accel.push({re.value(), im.value()});
    out.chunks = m;
    out.value = accel.head();
    out.est_error = accel.last_change();
    if (m >= opt.min_chunks && out.est_error < opt.tol) {
      if (++ok_streak >= opt.confirm) {
        out.converged = true;
        return out;
      }
    } else {
      ok_streak = 0;
    }
  }
  return out;
}

}  // namespace kpf
