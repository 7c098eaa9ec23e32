#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kpf/bv_function.hpp"
#include "kpf/geometry.hpp"
#include "kpf/reduce.hpp"

namespace kpf::bv {

struct VariationEstimate {
  double value = 0.0;
  double partition_norm = 0.0;
  int refinement_levels = 0;
  bool lower_bound_only = true;
  std::string diagnostic;                  // empty = clean stop
  std::vector<double> level_values;        // per-level sums (nondecreasing)

  bool clean() const { return diagnostic.empty(); }
};

struct HardyVariation {
  VariationEstimate vitali;
  VariationEstimate section_x;  // variation of f(., anchor_y)
  VariationEstimate section_y;  // variation of f(anchor_x, .)
};

struct TailVariation {
  double x_pos = 0.0;  // Var(f, [m, inf) x R)
  double x_neg = 0.0;  // Var(f, (-inf, -m] x R)
  double y_pos = 0.0;  // Var(f, R x [m, inf))
  double y_neg = 0.0;  // Var(f, R x (-inf, -m])
};

struct VariationMeasure {
  GridPartition grid;
  std::vector<double> masses;  // row-major, nx * ny
  double total = 0.0;

  double mass(std::size_t i, std::size_t j) const { return masses[j * grid.nx() + i]; }
};

struct DiagnosticsReport {
  struct Violation {
    std::string check;
    double x = 0.0, y = 0.0;
    double lhs = 0.0, rhs = 0.0;
  };
  std::vector<Violation> violations;
  int checks = 0;

  bool passed() const { return violations.empty(); }
};

// Hot kernel: sum over grid cells of |mixed difference|. Row-parallel with a
// deterministic chunked reduction; the serial mode is the reference path.
double grid_abs_cell_sum(const BvFunction2& f, const std::vector<double>& xs,
                         const std::vector<double>& ys, Exec mode = default_exec());

double mixed_difference(const BvFunction2& f, const Rect2& rect);

VariationEstimate vitali_variation(const BvFunction2& f, const Rect2& rect,
                                   double tol, int max_levels = 12);

HardyVariation hardy_variation(const BvFunction2& f, const Rect2& rect, double tol,
                               std::optional<double> anchor_x = std::nullopt,
                               std::optional<double> anchor_y = std::nullopt);

TailVariation tail_variation(const BvFunction2& f, double m, double tol);

// V(f; t1, t2) = Var(f, (-inf, t1] x (-inf, t2)).
double total_variation_function(const BvFunction2& f, double t1, double t2, double tol);

VariationMeasure variation_measure(const BvFunction2& f, const GridPartition& grid,
                                   double tol);

DiagnosticsReport bv_zero_diagnostics(const BvFunction2& f,
                                      const std::vector<double>& probe_radii = {4, 8, 16, 32, 64},
                                      std::size_t sample_grid = 8);

// 1D variation of a section by dyadic refinement.
VariationEstimate variation_1d(const std::function<double(double)>& f, double a,
                               double b, double tol,
                               const std::vector<double>& breaks = {},
                               int max_levels = 16);

}  // namespace kpf::bv
