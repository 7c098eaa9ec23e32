#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "kpf/geometry.hpp"
#include "kpf/reduce.hpp"

namespace kpf {

// Expanding-window ladder for Pringsheim limits. Targets grow geometrically;
// window edges snap up to half-period multiples per axis; consecutive raw
// values are pairwise averaged (one Euler level) before the stop test.
struct LadderOptions {
  double tol = 1e-6;
  double factor = 2.0;
  int confirm = 3;      // consecutive deltas below tol required
  int max_rungs = 48;
  double start = 1.0;
  double snap_x = 0.0;  // half-period unit, 0 = no snapping
  double snap_y = 0.0;
  bool pairwise_average = true;
  // Asymmetric mode: per-side growth multipliers relative to the symmetric
  // target (exercises the four-parameter Pringsheim definition).
  bool asymmetric = false;
  double asym_lo_x = 1.0, asym_hi_x = 1.3, asym_lo_y = 1.15, asym_hi_y = 1.0;
};

struct PringsheimLadder {
  std::vector<Rect2> rungs;
  std::vector<cplx> values;    // raw window values
  std::vector<double> deltas;  // changes of the (averaged) sequence
  bool converged = false;
  int stall_count = 0;

  cplx value{0.0};  // final averaged value
  int rung_count() const { return static_cast<int>(rungs.size()); }
};

PringsheimLadder run_ladder(const std::function<cplx(const Rect2&, int)>& window_value,
                            const LadderOptions& opt);

}  // namespace kpf
