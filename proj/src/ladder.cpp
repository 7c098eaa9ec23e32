#include "kpf/ladder.hpp"

#include <algorithm>
#include <cmath>

namespace kpf {

namespace {
double snap_up(double target, double unit, double prev) {
  double v = target;
  if (unit > 0.0) v = std::ceil(target / unit - 1e-12) * unit;
  // Windows must be strictly nested.
  while (v <= prev) v += (unit > 0.0 ? unit : std::max(1.0, prev));
  return v;
}
}  // namespace

PringsheimLadder run_ladder(const std::function<cplx(const Rect2&, int)>& window_value,
                            const LadderOptions& opt) {
  PringsheimLadder lad;
  double target = opt.start;
  double prev_lx = 0.0, prev_ly = 0.0;
  cplx avg_prev = 0.0;
  int ok_streak = 0;

  for (int k = 0; k < opt.max_rungs; ++k) {
    const double lx = snap_up(target, opt.snap_x, prev_lx);
    const double ly = snap_up(target, opt.snap_y, prev_ly);
    prev_lx = lx;
    prev_ly = ly;

    Rect2 window{-lx, lx, -ly, ly};
    if (opt.asymmetric) {
      window.x_lo = -lx * opt.asym_lo_x;
      window.x_hi = lx * opt.asym_hi_x;
      window.y_lo = -ly * opt.asym_lo_y;
      window.y_hi = ly * opt.asym_hi_y;
    }

    const cplx raw = window_value(window, k);
    lad.rungs.push_back(window);
    lad.values.push_back(raw);

    const cplx avg = (opt.pairwise_average && k > 0)
                         ? 0.5 * (raw + lad.values[static_cast<std::size_t>(k) - 1])
                         : raw;
    if (k > 0) {
      const double delta = std::abs(avg - avg_prev);
      lad.deltas.push_back(delta);
      const double scale = std::max(1.0, std::abs(avg));
      if (delta < opt.tol * scale) {
        if (++ok_streak >= opt.confirm) {
          lad.converged = true;
          lad.value = avg;
          return lad;
        }
      } else {
        ok_streak = 0;
        // Stall: no meaningful decay across the confirm window.
        const std::size_t n = lad.deltas.size();
        if (n > static_cast<std::size_t>(opt.confirm)) {
          const double old = lad.deltas[n - 1 - static_cast<std::size_t>(opt.confirm)];
          if (delta >= 0.9 * old) ++lad.stall_count;
        }
      }
    }
    avg_prev = avg;
    lad.value = avg;
    target *= opt.factor;
  }
  return lad;
}

}  // namespace kpf
