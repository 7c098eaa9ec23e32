#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "kpf/bv_core.hpp"
#include "kpf/bv_function.hpp"
#include "kpf/geometry.hpp"
#include "kpf/ladder.hpp"
#include "kpf/quadrature.hpp"

namespace kpf::rs {

struct StieltjesResult {
  cplx value{0.0};
  double partition_norm = 0.0;
  int refinement_levels = 0;
  double est_error = 0.0;
};

struct RsOptions {
  double tol = 1e-6;
  int max_levels = 10;
  double max_cell_x = kInf;  // oscillation-aware initial cell caps
  double max_cell_y = kInf;
  double grade_hmin = 1e-5;  // grading toward declared discontinuity lines
  bool center_tags = true;   // false: upper-right corner tags
  Exec mode = default_exec();
};

// Hot kernel: sum over grid cells of integrand(tag) * Delta(integrator).
cplx rs_grid_sum(const std::function<cplx(double, double)>& integrand,
                 const std::function<cplx(double, double)>& integrator,
                 const std::vector<double>& xs, const std::vector<double>& ys,
                 bool center_tags, Exec mode);

// Riemann-Stieltjes integral of g with respect to f over a compact rectangle,
// tags at cell centers, nested dyadic refinement.
StieltjesResult rs_integral(const Integrand2& g, const BvFunction2& f,
                            const Rect2& rect, const RsOptions& opt = {});

struct ImproperOptions {
  double tol = 1e-4;
  double ladder_factor = 2.0;
  int confirm = 3;
  int max_rungs = 24;
  double start = 1.0;
  bool asymmetric = false;
  double inner_tol_scale = 0.25;  // per-window refinement tol = tol * scale
  RsOptions rs;
};

// Pringsheim improper RS integral over nested windows. Separable fast path
// when both g and f factor; the tensor-grid path is the definition of record.
PringsheimLadder rs_improper(const Integrand2& g, const BvFunction2& f,
                             const ImproperOptions& opt = {});

// Same ladder with the roles swapped: integral of f with respect to the
// complex integrator h.
PringsheimLadder rs_improper_wrt(const BvFunction2& f, const Integrand2& h,
                                 const ImproperOptions& opt = {});

struct PartsIdentity {
  cplx lhs{0.0};  // iint g df
  cplx rhs{0.0};  // corners - edges + iint f dg
  cplx corners{0.0};
  std::array<cplx, 4> edges{};  // top, bottom, right, left
  cplx f_dg{0.0};
  double residual() const { return std::abs(lhs - rhs); }
};

// Nine-term integration-by-parts identity on a compact rectangle.
PartsIdentity integration_by_parts_compact(const Integrand2& g, const BvFunction2& f,
                                           const Rect2& rect, double tol);

struct ImproperParts {
  cplx lhs{0.0};
  cplx rhs{0.0};
  bool lhs_converged = false;
  bool rhs_converged = false;
  double residual() const { return std::abs(lhs - rhs); }
};

// iint_{R^2} g df = iint_{R^2} f dg for bounded continuous g and vanishing f.
ImproperParts parts_identity_improper(const Integrand2& g, const BvFunction2& f,
                                      const ImproperOptions& opt = {});

// Lemma-style reduction: with h the running double integral of f_density,
// iint g dh equals iint g * f_density dA.
std::pair<cplx, cplx> reduce_to_riemann(const std::function<cplx(double, double)>& g,
                                        const std::function<double(double, double)>& f_density,
                                        const Rect2& rect, double tol,
                                        Exec mode = default_exec());

struct DominationResult {
  double lhs = 0.0;  // |iint g df|
  double rhs = 0.0;  // iint |g| dV via the grid variation measure
  bool lhs_converged = false;
  bool ok() const { return lhs <= rhs + 1e-9; }
};

DominationResult domination_check(const Integrand2& g, const BvFunction2& f, double tol);

}  // namespace kpf::rs
