#include <cmath>

#include "doctest.h"
#include "golden_constants.hpp"
#include "kpf/funclib.hpp"
#include "kpf/kp_transform.hpp"
#include "oracles.hpp"

using namespace kpf;
using namespace kpf::kp;

namespace {

const BvFunction2& entry(const char* name) { return funclib::catalog_get(name).fn; }

TransformOptions tolerant(double tol) {
  TransformOptions opt;
  opt.tol = tol;
  opt.assume_bv0 = true;
  return opt;
}

}  // namespace

TEST_CASE("direct transform basics") {
  SUBCASE("zero function") {
    const PringsheimResult r = kpft_direct(entry("zero"), 1.0, 1.0, tolerant(1e-8));
    CHECK(r.converged);
    CHECK(std::abs(r.value) == doctest::Approx(0.0));
  }
  SUBCASE("reciprocal at (1,1) equals the squared incomplete-Gamma factor") {
    const PringsheimResult r = kpft_direct(entry("reciprocal"), 1.0, 1.0, tolerant(1e-4));
    CHECK(r.converged);
    const cplx expected = oracle::gamma0(1.0) * oracle::gamma0(1.0);
    CHECK(std::abs(r.value - expected) < 1e-3);
  }
  SUBCASE("exp2 at (1,2) has the closed form 0.4") {
    const PringsheimResult r = kpft_direct(entry("exp2"), 1.0, 2.0, tolerant(1e-7));
    CHECK(r.converged);
    CHECK(r.value.real() == doctest::Approx(0.4).epsilon(1e-6));
    CHECK(std::abs(r.value.imag()) < 1e-7);
  }
  SUBCASE("axis frequencies are rejected") {
    CHECK_THROWS_AS(kpft_direct(entry("exp2"), 0.0, 1.0, tolerant(1e-6)),
                    ValidationError);
  }
  SUBCASE("non-vanishing functions are rejected without the override") {
    BvFunction2 one;
    one.eval = [](double, double) { return 1.0; };
    TransformOptions opt;
    opt.tol = 1e-4;
    CHECK_THROWS_AS(kpft_direct(one, 1.0, 1.0, opt), ValidationError);
  }
}

TEST_CASE("generic tensor-panel guard agrees with the separable fast path") {
  // The 2D path is the definition of record; run it once at coarse tolerance.
  TransformOptions coarse = tolerant(2e-3);
  coarse.force_generic = true;
  coarse.max_rungs = 9;

  SUBCASE("exp2") {
    const cplx generic = kpft_direct(entry("exp2"), 1.0, 2.0, coarse).value;
    const cplx fast = kpft_direct(entry("exp2"), 1.0, 2.0, tolerant(1e-7)).value;
    CHECK(std::abs(generic - fast) < 5e-3);
  }
  SUBCASE("reciprocal") {
    const cplx generic = kpft_direct(entry("reciprocal"), 1.0, 1.0, coarse).value;
    const cplx fast = kpft_direct(entry("reciprocal"), 1.0, 1.0, tolerant(1e-4)).value;
    CHECK(std::abs(generic - fast) < 5e-2);
  }
}

TEST_CASE("stieltjes route matches the direct route") {
  const std::pair<double, double> freqs[] = {{1.0, 1.0}, {2.0, 0.5}, {-1.0, 3.0}};
  for (const char* name : {"reciprocal", "exp2"}) {
    for (const auto& [xi, eta] : freqs) {
      CAPTURE(std::string(name));
      CAPTURE(xi);
      CAPTURE(eta);
      const cplx direct = kpft_direct(entry(name), xi, eta, tolerant(1e-4)).value;
      const PringsheimResult st = kpft_stieltjes(entry(name), xi, eta, tolerant(1e-3));
      CHECK(st.converged);
      CHECK(std::abs(direct - st.value) < 3e-3);
    }
  }
}

TEST_CASE("stieltjes route against the incomplete-Gamma oracle at (2, 0.5)") {
  const PringsheimResult st =
      kpft_stieltjes(entry("reciprocal"), 2.0, 0.5, tolerant(1e-3));
  const cplx expected = oracle::gamma0(2.0) * oracle::gamma0(0.5);
  CHECK(std::abs(st.value - expected) < 1e-3);
}

TEST_CASE("transform grid") {
  SUBCASE("empty input") {
    const TransformGrid g = kpft_grid(entry("reciprocal"), {}, 1e-4);
    CHECK(g.values.empty());
  }
  SUBCASE("three frequencies against the oracle") {
    const TransformGrid g =
        kpft_grid(entry("reciprocal"), {{1, 1}, {1, 2}, {2, 1}}, 1e-4);
    REQUIRE(g.values.size() == 3);
    for (std::size_t k = 0; k < 3; ++k) {
      CHECK(g.converged[k]);
      const cplx expected = oracle::gamma0(g.frequencies[k].first) *
                            oracle::gamma0(g.frequencies[k].second);
      CHECK(std::abs(g.values[k] - expected) < 1e-3);
    }
  }
  SUBCASE("an axis frequency rejects the batch") {
    CHECK_THROWS_AS(kpft_grid(entry("reciprocal"), {{1, 1}, {0, 1}}, 1e-4),
                    ValidationError);
  }
}

TEST_CASE("linearity across catalog pairs") {
  const BvFunction2& f = entry("exp2");
  const BvFunction2& g = entry("box");
  BvFunction2 combo;
  combo.eval = [&](double x, double y) { return 2.0 * f.eval(x, y) - 0.5 * g.eval(x, y); };
  for (const auto& t : f.separable)
    combo.separable.push_back({[u = t.u](double x) { return 2.0 * u(x); }, t.v});
  for (const auto& t : g.separable)
    combo.separable.push_back({[u = t.u](double x) { return -0.5 * u(x); }, t.v});
  combo.x_breaks = {-1.0, 0.0, 1.0};
  combo.y_breaks = {-1.0, 0.0, 1.0};
  combo.bv0_certified = true;

  for (auto [xi, eta] : {std::pair{1.0, 1.0}, std::pair{0.5, 2.0}}) {
    const cplx lhs = kpft_direct(combo, xi, eta, tolerant(1e-6)).value;
    const cplx rhs = 2.0 * kpft_direct(f, xi, eta, tolerant(1e-6)).value -
                     0.5 * kpft_direct(g, xi, eta, tolerant(1e-6)).value;
    CHECK(std::abs(lhs - rhs) < 3e-6);
  }
}

TEST_CASE("classical consistency and conjugate symmetry") {
  const BvFunction2& f = entry("exp2");
  for (auto [xi, eta] : {std::pair{1.0, 1.0}, std::pair{2.0, 0.5}, std::pair{-1.0, 3.0},
                         std::pair{0.7, -0.3}, std::pair{5.0, 5.0}}) {
    const cplx got = kpft_direct(f, xi, eta, tolerant(1e-7)).value;
    const cplx closed{4.0 / ((1.0 + xi * xi) * (1.0 + eta * eta)), 0.0};
    CHECK(std::abs(got - closed) < 1e-6);
  }
  for (const char* name : {"reciprocal", "exp2"}) {
    const cplx plus = kpft_direct(entry(name), 1.3, 0.8, tolerant(1e-5)).value;
    const cplx minus = kpft_direct(entry(name), -1.3, -0.8, tolerant(1e-5)).value;
    CHECK(std::abs(minus - std::conj(plus)) < 3e-5);
  }
}

TEST_CASE("windows grow as the frequency approaches the axis") {
  // The transform of the reciprocal blows up toward xi = 0; the ladder needs
  // strictly wider windows (more rungs) the closer the frequency sits.
  TransformOptions opt = tolerant(1e-3);
  int prev = 0;
  for (double xi : {1.0, 0.1, 0.01}) {
    const PringsheimResult r = kpft_direct(entry("reciprocal"), xi, 1.0, opt);
    CHECK(r.converged);
    CHECK(r.ladder.rungs > prev);
    prev = r.ladder.rungs;
  }
}

TEST_CASE("continuity probe") {
  SUBCASE("zero function oscillates by zero") {
    const ContinuityReport rep =
        continuity_probe(entry("zero"), 1.0, 1.0, {0.2, 0.1}, 1e-9, tolerant(1e-8));
    for (double o : rep.oscillation) CHECK(o == doctest::Approx(0.0));
    CHECK(rep.passed());
  }
  SUBCASE("reciprocal at (1,1): oscillation decreases through the radius ladder") {
    const ContinuityReport rep = continuity_probe(entry("reciprocal"), 1.0, 1.0,
                                                  {0.2, 0.1, 0.05}, 0.5, tolerant(1e-4));
    CHECK(rep.nonincreasing);
    CHECK(rep.oscillation.back() < 0.5);
  }
  SUBCASE("a ball crossing the axis is rejected") {
    CHECK_THROWS_AS(continuity_probe(entry("reciprocal"), 0.05, 1.0, {0.1}, 1e-3,
                                     tolerant(1e-4)),
                    ValidationError);
  }
}
