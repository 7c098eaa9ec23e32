#pragma once

#include <string>
#include <vector>

#include "kpf/bv_function.hpp"
#include "kpf/ladder.hpp"
#include "kpf/stieltjes.hpp"

namespace kpf::kp {

enum class Route { automatic, direct, stieltjes, oracle };

struct TransformOptions {
  double tol = 1e-6;
  Route route = Route::automatic;
  double ladder_factor = 2.0;
  int confirm = 3;
  int max_rungs = 48;
  // Skip the vanishing-at-infinity probe (callers that already ran the full
  // diagnostics, or deliberately feed non-decaying functions).
  bool assume_bv0 = false;
  // Run the tensor panel path even when separable metadata is present (the
  // coarse-tolerance guard in the test matrices).
  bool force_generic = false;
  Exec mode = default_exec();
};

struct LadderSummary {
  int rungs = 0;
  bool converged = false;
  double last_delta = kInf;
  std::vector<double> deltas;
};

struct PringsheimResult {
  cplx value{0.0};
  LadderSummary ladder;
  bool converged = false;
};

// Truncated double Fourier integral on an expanding window ladder, edges
// snapped to half periods, consecutive rungs pairwise averaged. Separable
// metadata switches to products of 1D improper integrals; the tensor panel
// path is the definition of record.
PringsheimResult kpft_direct(const BvFunction2& f, double xi, double eta,
                             const TransformOptions& opt = {});

// Stieltjes route: -(1/(xi eta)) * improper RS integral of e^{-i(xi t1 + eta t2)}.
PringsheimResult kpft_stieltjes(const BvFunction2& f, double xi, double eta,
                                const TransformOptions& opt = {});

struct TransformGrid {
  std::vector<std::pair<double, double>> frequencies;
  std::vector<cplx> values;
  std::vector<bool> converged;
  std::vector<std::string> failures;  // empty string = ok
};

TransformGrid kpft_grid(const BvFunction2& f,
                        const std::vector<std::pair<double, double>>& freqs,
                        double tol, Route route = Route::automatic);

struct ContinuityReport {
  double xi0 = 0.0, eta0 = 0.0;
  cplx center{0.0};
  std::vector<double> radii;
  std::vector<double> oscillation;  // max over 8 compass points per radius
  bool nonincreasing = false;
  bool below_tol = false;
  bool passed() const { return nonincreasing && below_tol; }
};

ContinuityReport continuity_probe(const BvFunction2& f, double xi0, double eta0,
                                  const std::vector<double>& radii, double tol,
                                  const TransformOptions& opt = {});

}  // namespace kpf::kp
