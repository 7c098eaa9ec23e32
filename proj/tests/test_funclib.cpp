#include <cmath>

#include "doctest.h"
#include "golden_constants.hpp"
#include "kpf/bv_core.hpp"
#include "kpf/funclib.hpp"
#include "kpf/kp_transform.hpp"
#include "oracles.hpp"

using namespace kpf;
using namespace kpf::funclib;

TEST_CASE("catalog contents") {
  const auto& entries = catalog();
  CHECK(entries.size() >= 5);
  for (const char* name : {"zero", "reciprocal", "exp2", "box", "additive", "bump"})
    CHECK(standard_catalog().contains(name));

  const CatalogEntry& rec = catalog_get("reciprocal");
  CHECK(rec.fn.eval(2.0, 3.0) == doctest::Approx(1.0 / 6));
  CHECK(rec.fn.eval(0.5, 3.0) == 0.0);
  CHECK(rec.tags.count(ClassTag::L1) == 0);
  CHECK(rec.tags.count(ClassTag::BV_norm0) == 1);

  // The inclusion witnesses: one vanishing entry outside L1, one inside.
  CHECK(catalog_get("exp2").tags.count(ClassTag::L1) == 1);
  CHECK(catalog_get("exp2").tags.count(ClassTag::BV_norm0) == 1);
}

TEST_CASE("exp2 oracle matches the plain integral at the origin") {
  const auto& exp2 = catalog_get("exp2").fn;
  CHECK(exp2.transform_oracle->eval(0.0, 0.0).real() == doctest::Approx(4.0));
  const double quad = oracle::simpson2d(
      [&](double x, double y) { return exp2.eval(x, y); }, -20, 20, -20, 20, 1e-9);
  CHECK(quad == doctest::Approx(4.0).epsilon(1e-7));
}

TEST_CASE("gamma0 oracle") {
  SUBCASE("conjugate symmetry") {
    for (double s : {0.3, 1.0, 2.5}) {
      const cplx a = gamma0_oracle(s);
      const cplx b = gamma0_oracle(-s);
      CHECK(b.real() == doctest::Approx(a.real()).epsilon(1e-12));
      CHECK(b.imag() == doctest::Approx(-a.imag()).epsilon(1e-12));
    }
  }
  SUBCASE("golden constants from the derivation script") {
    for (int k = 0; k < 4; ++k) {
      const cplx got = gamma0_oracle(golden::kGamma0Args[k]);
      CHECK(std::abs(got - golden::kGamma0Values[k]) < 1e-8);
    }
  }
  SUBCASE("blow-up toward the axis") {
    CHECK(std::abs(gamma0_oracle(0.01)) > std::abs(gamma0_oracle(0.1)));
    CHECK(std::abs(gamma0_oracle(0.1)) > std::abs(gamma0_oracle(1.0)));
  }
  SUBCASE("rejects s = 0") { CHECK_THROWS_AS(gamma0_oracle(0.0), ValidationError); }
}

TEST_CASE("registration rules") {
  Registry reg;
  CatalogEntry zero;
  zero.name = "zero";
  zero.fn.eval = [](double, double) { return 0.0; };
  zero.fn.bv0_certified = true;
  reg.add(zero);

  SUBCASE("duplicate names are rejected") {
    CatalogEntry again = zero;
    CHECK_THROWS_AS(reg.add(again), ValidationError);
  }
  SUBCASE("a constant cannot claim to vanish") {
    CatalogEntry one;
    one.name = "one";
    one.fn.eval = [](double, double) { return 1.0; };
    one.tags = {ClassTag::BV_norm0};
    CHECK_THROWS_AS(reg.add(one), ValidationError);
  }
  SUBCASE("a wrong transform oracle is rejected") {
    CatalogEntry lying = catalog_get("exp2");
    lying.name = "exp2_lying";
    TransformOracle o;
    o.eval = [](double, double) { return cplx(123.0); };
    lying.fn.transform_oracle = o;
    CHECK_THROWS_AS(reg.add(lying), ValidationError);
  }
  SUBCASE("the reciprocal with its oracle is accepted") {
    CatalogEntry rec = catalog_get("reciprocal");
    rec.name = "reciprocal_again";
    reg.add(rec);  // re-runs diagnostics and the oracle spot check
    CHECK(reg.contains("reciprocal_again"));
  }
}

TEST_CASE("claimed variations match the estimator within 1%") {
  for (const auto& e : catalog()) {
    if (!e.fn.known_variation) continue;
    const double est = bv::vitali_variation(e.fn, Rect2::plane(), 1e-3).value;
    if (*e.fn.known_variation == 0.0) {
      CHECK(est == doctest::Approx(0.0));
    } else {
      CHECK(est == doctest::Approx(*e.fn.known_variation).epsilon(0.01));
    }
  }
}

TEST_CASE("every transform oracle passes a 3-frequency spot check") {
  kp::TransformOptions opt;
  opt.tol = 1e-4;
  opt.assume_bv0 = true;
  const std::pair<double, double> freqs[] = {{1.0, 1.0}, {2.0, 0.5}, {-1.0, 3.0}};
  for (const auto& e : catalog()) {
    if (!e.fn.transform_oracle) continue;
    for (const auto& [xi, eta] : freqs) {
      const cplx direct = kp::kpft_direct(e.fn, xi, eta, opt).value;
      const cplx claimed = e.fn.transform_oracle->eval(xi, eta);
      CHECK(std::abs(direct - claimed) < 1e-3);
    }
  }
}
