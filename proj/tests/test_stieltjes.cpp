#include <cmath>

#include "doctest.h"
#include "kpf/funclib.hpp"
#include "kpf/inversion.hpp"
#include "kpf/kp_transform.hpp"
#include "kpf/osc_kernels.hpp"
#include "kpf/stieltjes.hpp"
#include "oracles.hpp"

using namespace kpf;
using namespace kpf::rs;

namespace {

const BvFunction2& entry(const char* name) { return funclib::catalog_get(name).fn; }

BvFunction2 product_xy() {
  BvFunction2 f;
  f.eval = [](double x, double y) { return x * y; };
  return f;
}

Integrand2 cos_sum() {
  Integrand2 g = make_integrand(
      [](double t1, double t2) { return cplx(std::cos(t1 + t2)); });
  g.osc_x = 1.0;
  g.osc_y = 1.0;
  return g;
}

Integrand2 cos_cos() {
  Integrand2 g;
  g.eval = [](double t1, double t2) { return cplx(std::cos(t1) * std::cos(t2)); };
  g.gx = [](double t) { return cplx(std::cos(t)); };
  g.gy = [](double t) { return cplx(std::cos(t)); };
  g.osc_x = 1.0;
  g.osc_y = 1.0;
  return g;
}

Integrand2 constant_one() {
  return make_integrand([](double, double) { return cplx(1.0); });
}

}  // namespace

TEST_CASE("constant integrand reproduces the mixed difference") {
  const Rect2 rect{0.3, 1.7, -0.4, 2.2};
  for (const char* name : {"reciprocal", "exp2", "box"}) {
    const BvFunction2& f = entry(name);
    const StieltjesResult r = rs_integral(constant_one(), f, rect, {});
    const double direct = bv::mixed_difference(f, rect);
    CHECK(std::abs(r.value - cplx(direct)) <=
          1e3 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(direct)));
  }
}

TEST_CASE("rs integral of 1 d(xy) over the unit square is the area") {
  const StieltjesResult r = rs_integral(constant_one(), product_xy(), {0, 1, 0, 1}, {});
  CHECK(r.value.real() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(r.value.imag() == 0.0);
}

TEST_CASE("oscillatory integrand against a brute-force fine grid") {
  RsOptions opt;
  opt.tol = 1e-7;
  const StieltjesResult r = rs_integral(cos_sum(), entry("reciprocal"), {1, 2, 1, 2}, opt);
  const cplx brute = oracle::rs_brute(
      [](double t1, double t2) { return cplx(std::cos(t1 + t2)); },
      [&](double x, double y) { return entry("reciprocal").eval(x, y); }, 1, 2, 1, 2,
      1 << 12);
  CHECK(std::abs(r.value - brute) < 1e-6);
}

TEST_CASE("bilinearity in the integrand and the integrator") {
  const Rect2 rect{1, 3, 1, 3};
  const BvFunction2& f = entry("reciprocal");
  RsOptions opt;
  opt.tol = 1e-8;

  const cplx a = rs_integral(cos_sum(), f, rect, opt).value;
  const cplx b = rs_integral(constant_one(), f, rect, opt).value;
  Integrand2 combo = make_integrand(
      [](double t1, double t2) { return cplx(2.0 * std::cos(t1 + t2) - 3.0); });
  combo.osc_x = 1.0;
  combo.osc_y = 1.0;
  CHECK(std::abs(rs_integral(combo, f, rect, opt).value - (2.0 * a - 3.0 * b)) < 1e-7);

  // Integrator slot: f + 0.5 * xy.
  BvFunction2 mix;
  mix.eval = [&f](double x, double y) { return f.eval(x, y) + 0.5 * x * y; };
  mix.x_breaks = f.x_breaks;
  mix.y_breaks = f.y_breaks;
  const cplx lhs = rs_integral(cos_sum(), mix, rect, opt).value;
  const cplx rhs = rs_integral(cos_sum(), f, rect, opt).value +
                   0.5 * rs_integral(cos_sum(), product_xy(), rect, opt).value;
  CHECK(std::abs(lhs - rhs) < 1e-7);
}

TEST_CASE("center and corner tags agree at fine norms") {
  RsOptions centers;
  centers.tol = 1e-7;
  RsOptions corners = centers;
  corners.center_tags = false;
  const Rect2 rect{1, 2, 1, 2};
  const cplx a = rs_integral(cos_sum(), entry("reciprocal"), rect, centers).value;
  const cplx b = rs_integral(cos_sum(), entry("reciprocal"), rect, corners).value;
  CHECK(std::abs(a - b) < 1e-5);
}

TEST_CASE("improper rs integral") {
  SUBCASE("g = 1: the improper mixed difference of the reciprocal vanishes") {
    const PringsheimLadder lad = rs_improper(constant_one(), entry("reciprocal"), {});
    CHECK(lad.converged);
    CHECK(std::abs(lad.value) < 1e-6);
  }
  SUBCASE("zero integrator") {
    const PringsheimLadder lad = rs_improper(cos_sum(), entry("zero"), {});
    CHECK(lad.converged);
    CHECK(std::abs(lad.value) == doctest::Approx(0.0));
  }
  SUBCASE("oscillatory integrand ties back to the transform") {
    // iint e^{-i(t1+t2)} df = -F(f)(1,1) for the reciprocal.
    ImproperOptions opt;
    opt.tol = 1e-3;
    const PringsheimLadder lad = rs_improper(exp_integrand(1.0, 1.0),
                                             entry("reciprocal"), opt);
    CHECK(lad.converged);
    const cplx expected = -oracle::gamma0(1.0) * oracle::gamma0(1.0);
    CHECK(std::abs(lad.value - expected) < 2e-3);
  }
  SUBCASE("ladder factors 2 and 3 land on the same value") {
    ImproperOptions f2;
    f2.tol = 1e-3;
    ImproperOptions f3 = f2;
    f3.ladder_factor = 3.0;
    const cplx a = rs_improper(exp_integrand(1.0, 1.0), entry("exp2"), f2).value;
    const cplx b = rs_improper(exp_integrand(1.0, 1.0), entry("exp2"), f3).value;
    CHECK(std::abs(a - b) < 2e-3);
  }
  SUBCASE("asymmetric windows exercise the four-parameter limit") {
    ImproperOptions sym;
    sym.tol = 1e-3;
    ImproperOptions asym = sym;
    asym.asymmetric = true;
    const cplx a = rs_improper(exp_integrand(1.0, 1.0), entry("exp2"), sym).value;
    const cplx b = rs_improper(exp_integrand(1.0, 1.0), entry("exp2"), asym).value;
    CHECK(std::abs(a - b) < 2e-3);
  }
}

TEST_CASE("nine-term integration by parts on compact rectangles") {
  SUBCASE("constant integrator: both sides vanish") {
    BvFunction2 c;
    c.eval = [](double, double) { return 3.25; };
    const PartsIdentity id =
        integration_by_parts_compact(cos_sum(), c, {0, 2, 0, 2}, 1e-7);
    CHECK(std::abs(id.lhs) < 1e-9);
    CHECK(std::abs(id.rhs) < 1e-9);
  }
  SUBCASE("g = 1 reduces to the corner difference") {
    const BvFunction2& f = entry("reciprocal");
    const Rect2 rect{1, 4, 1, 4};
    const PartsIdentity id = integration_by_parts_compact(constant_one(), f, rect, 1e-7);
    const double direct = bv::mixed_difference(f, rect);
    CHECK(std::abs(id.lhs - cplx(direct)) < 1e-9);
    CHECK(std::abs(id.rhs - cplx(direct)) < 1e-9);
    CHECK(std::abs(id.f_dg) < 1e-12);
  }
  SUBCASE("oscillatory integrand on the reciprocal") {
    const PartsIdentity id =
        integration_by_parts_compact(cos_sum(), entry("reciprocal"), {1, 4, 1, 4}, 1e-7);
    CHECK(id.residual() < 1e-5);
  }
  SUBCASE("residual stays under 10x the tolerance across the matrix") {
    const Rect2 rects[] = {{1, 2, 1, 3}, {0.5, 4, 0.5, 2}, {-2, 2, -2, 2}};
    for (const char* name : {"reciprocal", "exp2", "box"}) {
      for (const Rect2& rect : rects) {
        CAPTURE(std::string(name));
        const PartsIdentity id =
            integration_by_parts_compact(cos_sum(), entry(name), rect, 1e-6);
        CHECK(id.residual() < 1e-5);
      }
    }
  }
}

TEST_CASE("improper integration by parts") {
  SUBCASE("zero function") {
    const ImproperParts p = parts_identity_improper(cos_cos(), entry("zero"), {});
    CHECK(std::abs(p.lhs) == doctest::Approx(0.0));
    CHECK(std::abs(p.rhs) == doctest::Approx(0.0));
  }
  SUBCASE("g = 1: both sides vanish for the reciprocal") {
    ImproperOptions opt;
    opt.tol = 1e-4;
    const ImproperParts p =
        parts_identity_improper(constant_one(), entry("reciprocal"), opt);
    CHECK(std::abs(p.lhs) < 1e-3);
    CHECK(std::abs(p.rhs) < 1e-3);
  }
  SUBCASE("cos(t1)cos(t2) against the reciprocal") {
    ImproperOptions opt;
    opt.tol = 2e-4;
    opt.max_rungs = 30;
    const ImproperParts p = parts_identity_improper(cos_cos(), entry("reciprocal"), opt);
    CHECK(p.lhs_converged);
    CHECK(p.rhs_converged);
    CHECK(p.residual() < 1e-3);
  }
}

TEST_CASE("reduction to a plain Riemann integral") {
  SUBCASE("unit density recovers the area integral") {
    const auto [st, ri] = reduce_to_riemann(
        [](double, double) { return cplx(1.0); }, [](double, double) { return 1.0; },
        {0, 1, 0, 1}, 1e-9);
    CHECK(st.real() == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(ri.real() == doctest::Approx(1.0).epsilon(1e-8));
  }
  SUBCASE("zero density") {
    const auto [st, ri] = reduce_to_riemann(
        [](double t1, double t2) { return cplx(std::cos(t1 + t2)); },
        [](double, double) { return 0.0; }, {0, 2, 0, 2}, 1e-9);
    CHECK(std::abs(st) == doctest::Approx(0.0));
    CHECK(std::abs(ri) == doctest::Approx(0.0));
  }
  SUBCASE("oscillatory integrand with an exponential density") {
    const auto [st, ri] = reduce_to_riemann(
        [](double t1, double t2) { return cplx(std::cos(t1 + t2)); },
        [](double t1, double t2) { return std::exp(-t1 - t2); }, {0, 2, 0, 2}, 1e-8);
    const double expected = oracle::simpson2d(
        [](double t1, double t2) { return std::cos(t1 + t2) * std::exp(-t1 - t2); }, 0,
        2, 0, 2, 1e-11);
    CHECK(std::abs(st - ri) < 1e-6);
    CHECK(st.real() == doctest::Approx(expected).epsilon(1e-6));
  }
}

TEST_CASE("domination by the variation measure") {
  SUBCASE("zero function") {
    const DominationResult d = domination_check(cos_sum(), entry("zero"), 1e-3);
    CHECK(d.lhs == doctest::Approx(0.0));
    CHECK(d.rhs == doctest::Approx(0.0));
    CHECK(d.ok());
  }
  SUBCASE("g = 1: total variation dominates the vanishing difference") {
    const DominationResult d = domination_check(constant_one(), entry("reciprocal"), 1e-2);
    CHECK(d.lhs < 1e-2);
    CHECK(d.rhs == doctest::Approx(4.0).epsilon(0.05));
    CHECK(d.ok());
  }
  SUBCASE("oscillatory integrand") {
    const DominationResult d = domination_check(cos_sum(), entry("reciprocal"), 1e-2);
    CHECK(d.lhs_converged);
    CHECK(d.ok());
  }
}

TEST_CASE("cos-window identity: area integral equals the sin-window Stieltjes form") {
  // Window pair (u1, u2) on both axes; the area side carries the two
  // cos-window factors, the Stieltjes side the product of sin-window
  // primitives as integrator.
  const double u1 = 0.5, u2 = 2.0;
  const BvFunction2& f = entry("reciprocal");

  inv::InversionOptions iopt;
  iopt.tol = 2e-4;
  iopt.assume_bv0 = true;
  const double area_side =
      kPi * kPi *
      inv::kernel_form_inversion(f, 0.0, 0.0, inv::AnnularRegion{u1, u1, u2, u2}, iopt);

  Integrand2 h;
  const KernelSpec spec{u1, u2};
  h.gx = [spec](double t) { return cplx(kPi * sin_window_primitive(spec, t)); };
  h.gy = h.gx;
  h.eval = [gx = h.gx, gy = h.gy](double t1, double t2) { return gx(t1) * gy(t2); };
  h.osc_x = u2;
  h.osc_y = u2;
  ImproperOptions opt;
  opt.tol = 2e-4;
  opt.max_rungs = 30;
  const PringsheimLadder stieltjes_side = rs_improper_wrt(f, h, opt);

  CHECK(stieltjes_side.converged);
  CHECK(std::abs(cplx(area_side) - stieltjes_side.value) < 2e-3);
}

TEST_CASE("non-stabilizing refinement raises with the delta history") {
  // A non-BV integrator: sin(1/x) oscillation packed against x = 0.
  BvFunction2 f;
  f.eval = [](double x, double y) {
    return (x > 0.0 ? std::sin(1.0 / x) : 0.0) * y;
  };
  RsOptions opt;
  opt.tol = 1e-10;
  opt.max_levels = 6;
  try {
    rs_integral(cos_sum(), f, {0, 1, 0, 1}, opt);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK_FALSE(e.deltas().empty());
  }
}
