#pragma once

#include <array>
#include <string>
#include <vector>

#include "kpf/bv_function.hpp"
#include "kpf/kp_transform.hpp"
#include "kpf/osc_kernels.hpp"

namespace kpf::inv {

// Frequency region alpha_i <= |coordinate_i| <= beta_i.
struct AnnularRegion {
  double alpha1, alpha2;
  double beta1, beta2;

  AnnularRegion(double a1, double a2, double b1, double b2)
      : alpha1(a1), alpha2(a2), beta1(b1), beta2(b2) {
    if (!(0.0 < a1 && a1 < b1 && std::isfinite(b1)) ||
        !(0.0 < a2 && a2 < b2 && std::isfinite(b2)))
      throw ValidationError("AnnularRegion requires 0 < alpha_i < beta_i < inf");
  }
};

struct QuadrantLimits {
  double pp, pm, mp, mm;  // f(x+,y+), f(x+,y-), f(x-,y+), f(x-,y-)

  double average() const { return 0.25 * (pp + pm + mp + mm); }
};

struct InversionResult {
  double value = 0.0;
  AnnularRegion region{1.0, 1.0, 2.0, 2.0};
  double target = 0.0;
  double residual = 0.0;
  kp::LadderSummary ladder;
  bool ok = true;
  std::string failure;
};

struct InversionOptions {
  double tol = 1e-3;
  bool assume_bv0 = false;
  bool force_generic = false;
  kp::Route transform_route = kp::Route::oracle;  // frequency side F provider
  Exec mode = default_exec();
};

QuadrantLimits quadrant_limits(const BvFunction2& f, double x, double y,
                               double h0 = 0.5, int levels = 40, double tol = 1e-9);

// Kernel form: (1/pi^2) * Pringsheim limit of the window integrals of
// f(x+t1, y+t2) * w1(t1) * w2(t2), w_i(t) = (sin(beta_i t) - sin(alpha_i t))/t.
double kernel_form_inversion(const BvFunction2& f, double x, double y,
                             const AnnularRegion& region,
                             const InversionOptions& opt = {});

struct FrequencySideResult {
  double value = 0.0;
  double imag_residual = 0.0;
  cplx raw{0.0};
};

// (1/4pi^2) * integral of F(f) e^{i(x xi + y eta)} over the annular region,
// decomposed into the four sign rectangles.
FrequencySideResult frequency_side_inversion(const BvFunction2& f, double x, double y,
                                             const AnnularRegion& region,
                                             const InversionOptions& opt = {});

struct StudyResult {
  std::vector<InversionResult> stages;
  double target = 0.0;
  bool pass = false;
};

StudyResult inversion_study(const BvFunction2& f, double x, double y,
                            const std::vector<double>& alpha_ladder,
                            const std::vector<double>& beta_ladder,
                            const InversionOptions& opt = {},
                            double pass_tol = 5e-2);

// g_{(x,y)}(t1,t2) = f(x-t1,y-t2) + f(x-t1,y+t2) + f(x+t1,y-t2) + f(x+t1,y+t2).
BvFunction2 quadrant_sum_function(const BvFunction2& f, double x, double y);

struct PaiTailReport {
  double eps = 0.0;    // measured max of the three tail quantities at delta0
  double bound = 0.0;  // 12 Si(pi)^2 eps
  struct Case {
    KernelSpec spec1{1.0, 2.0}, spec2{1.0, 2.0};
    double difference = 0.0;
    double margin = 0.0;  // bound - difference
  };
  std::vector<Case> cases;
  bool all_within = true;
};

PaiTailReport pai_uniform_tail(const BvFunction2& f, double x, double y, double a1,
                               double a2,
                               const std::vector<std::pair<KernelSpec, KernelSpec>>& specs,
                               double delta0 = -1.0,
                               const InversionOptions& opt = {});

// Sampled sup of |A_{i,j}(u,v)| over the (i,j) lacunary block; a lower bound
// for the true sup.
double moricz_block_sup(const BvFunction2& f, double x, double y,
                        const LacunarySequence& seq1, const LacunarySequence& seq2,
                        std::size_t i, std::size_t j, std::size_t samples,
                        const InversionOptions& opt = {});

struct MoriczSeries {
  double partial_sum = 0.0;
  double bound = 0.0;
  std::size_t n = 0, m = 0;
  std::vector<double> blocks;  // (n-1) x (m-1), block (i,j) at (i-2)*(m-1)+(j-2)

  double block(std::size_t i, std::size_t j) const {
    return blocks[(i - 2) * (m - 1) + (j - 2)];
  }
  // Sum of blocks with i > n0 or j > m0.
  double tail(std::size_t n0, std::size_t m0) const;
};

MoriczSeries moricz_series(const BvFunction2& f, double x, double y,
                           const LacunarySequence& seq1, const LacunarySequence& seq2,
                           std::size_t n, std::size_t m, std::size_t samples,
                           const InversionOptions& opt = {});

struct UniformityReport {
  std::vector<std::array<double, 2>> points;
  std::vector<std::vector<double>> residuals;      // per point, per stage
  std::vector<double> max_residual_per_stage;
  std::vector<std::string> failures;
};

struct RegionLadder {
  std::vector<double> alphas;
  std::vector<double> betas;
};

UniformityReport uniformity_scan(const BvFunction2& f, double cx, double cy,
                                 double radius, std::size_t grid,
                                 const RegionLadder& ladder,
                                 const InversionOptions& opt = {});

}  // namespace kpf::inv
