#include <cmath>

#include "doctest.h"
#include "kpf/osc_kernels.hpp"
#include "oracles.hpp"

using namespace kpf;

TEST_CASE("sine integral values") {
  CHECK(si(0.0) == 0.0);

  // Adaptive-quadrature oracle at 1e-14.
  const double si_pi = oracle::si(kPi);
  CHECK(si(kPi) == doctest::Approx(si_pi).epsilon(1e-12));
  CHECK(si(kPi) == doctest::Approx(1.851937052).epsilon(1e-8));

  // Spot checks across the panel and asymptotic branches.
  for (double x : {0.3, 1.0, 2.0, 10.0, 49.5, 50.5, 120.0, 1000.0}) {
    CHECK(si(x) == doctest::Approx(oracle::si(x)).epsilon(5e-13));
  }
}

TEST_CASE("sine integral oddness and global max at pi") {
  for (double x : {0.1, 0.7, 3.0, 12.0, 77.0}) {
    CHECK(si(-x) == doctest::Approx(-si(x)).epsilon(1e-15));
  }
  const double peak = si(kPi);
  CHECK(peak > si(2.0 * kPi));
  // Scan: 0 <= Si(x) <= Si(pi) for x >= 0.
  for (int k = 0; k <= 400; ++k) {
    const double x = 0.1 * k;
    const double v = si(x);
    CHECK(v >= -1e-15);
    CHECK(v <= peak + 1e-12);
  }
}

TEST_CASE("dirichlet window") {
  const KernelSpec spec{1.0, 2.0};
  CHECK(dirichlet_window(spec, 0.0) == doctest::Approx((2.0 - 1.0) / kPi).epsilon(1e-14));
  CHECK(dirichlet_window(spec, kPi) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(dirichlet_window(spec, 1.0) ==
        doctest::Approx((std::sin(2.0) - std::sin(1.0)) / kPi).epsilon(1e-14));
}

TEST_CASE("dirichlet window series branch meets the direct branch") {
  for (double beta : {2.0, 10.0, 50.0}) {
    const KernelSpec spec{0.5, beta};
    const double tau0 = 1e-3 * std::min(1.0, 1.0 / beta);
    const double lo = dirichlet_window(spec, tau0 * (1.0 - 1e-9));
    const double hi = dirichlet_window(spec, tau0 * (1.0 + 1e-9));
    CHECK(std::abs(lo - hi) < 1e-12);
  }
}

TEST_CASE("cos window") {
  CHECK(cos_window(1.0, 2.0, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  for (double t : {0.5, 1.0, 3.0}) {
    CHECK(cos_window(0.0, 4.0, t) == doctest::Approx(std::sin(4.0 * t) / t).epsilon(1e-14));
  }
  CHECK(cos_window(1.0, 2.0, 1.0) ==
        doctest::Approx(std::sin(2.0) - std::sin(1.0)).epsilon(1e-14));
  CHECK_THROWS_AS(cos_window(2.0, 2.0, 1.0), ValidationError);
}

TEST_CASE("sin window primitive") {
  const KernelSpec spec{1.0, 2.0};
  CHECK(sin_window_primitive(spec, 0.0) == 0.0);
  CHECK_THROWS_AS(KernelSpec(2.0, 2.0), ValidationError);

  const double expected = (oracle::si(2.0 * kPi) - oracle::si(kPi)) / kPi;
  CHECK(sin_window_primitive(spec, kPi) == doctest::Approx(expected).epsilon(1e-12));

  // |(Si(beta z) - Si(alpha z))/pi| <= Si(pi)/pi everywhere.
  const double cap = si(kPi) / kPi + 1e-12;
  for (double beta : {1.5, 4.0, 40.0}) {
    const KernelSpec s{0.25, beta};
    for (int k = -60; k <= 60; ++k) {
      CHECK(std::abs(sin_window_primitive(s, 0.5 * k)) <= cap);
    }
  }
}

TEST_CASE("lacunary certification") {
  const auto pow2 = [](std::size_t j) { return std::pow(2.0, static_cast<double>(j)); };
  const LacunarySequence seq = lacunary_certify(pow2, 20, 1e-12);
  CHECK(seq.A == doctest::Approx(2.0).epsilon(1e-9));

  const auto pow3 = [](std::size_t j) { return std::pow(3.0, static_cast<double>(j)); };
  CHECK(lacunary_certify(pow3, 20, 1e-12).A == doctest::Approx(1.5).epsilon(1e-9));

  const auto arithmetic = [](std::size_t j) { return static_cast<double>(j); };
  CHECK_THROWS_AS(lacunary_certify(arithmetic, 4, 1e-12), ValidationError);
}

TEST_CASE("geometric rules certify at r/(r-1)") {
  for (double r : {1.5, 2.0, 3.0, 5.0}) {
    const auto rule = [r](std::size_t j) { return std::pow(r, static_cast<double>(j)); };
    CHECK(lacunary_certify(rule, 16, 1e-13).A ==
          doctest::Approx(r / (r - 1.0)).epsilon(1e-9));
  }
}

TEST_CASE("lm1 partial sums respect 3A+4") {
  const LacunarySequence seq = lacunary_certify(
      [](std::size_t j) { return std::pow(2.0, static_cast<double>(j)); }, 20, 1e-12);
  const double bound = 3.0 * seq.A + 4.0;
  CHECK(bound == doctest::Approx(10.0).epsilon(1e-9));

  CHECK(lm1_sum(0.7, seq, 0) == 0.0);
  CHECK(lm1_sum(1.0, seq, 30) <= bound);
  CHECK(lm1_sum(100.0, seq, 30) <= bound);
  CHECK(lm1_sum(1.0, seq, 30) > 0.0);

  // Nondecreasing in the term count, bounded for every probed t.
  for (double t : {-100.0, -10.0, -1.0, -0.1, -0.01, 0.01, 0.1, 1.0, 10.0, 100.0, 1000.0}) {
    double prev = 0.0;
    for (std::size_t terms : {5u, 10u, 20u, 30u}) {
      const double v = lm1_sum(t, seq, terms);
      CHECK(v >= prev - 1e-12);
      CHECK(v <= bound);
      prev = v;
    }
  }
}

TEST_CASE("lm2 tails respect 3A/(|t| u_m)") {
  const LacunarySequence seq = lacunary_certify(
      [](std::size_t j) { return std::pow(2.0, static_cast<double>(j)); }, 20, 1e-12);

  CHECK(lm2_tail(1.0, seq, 5, 0) == 0.0);

  const double v1 = lm2_tail(1.0, seq, 5, 30);
  CHECK(v1 <= 3.0 * seq.A / (1.0 * 32.0));
  CHECK(v1 > 0.0);

  const double v2 = lm2_tail(0.5, seq, 8, 30);
  CHECK(v2 <= 3.0 * seq.A / (0.5 * 256.0));

  for (double t : {-100.0, -1.0, -0.01, 0.01, 1.0, 100.0}) {
    for (std::size_t m : {3u, 5u, 8u}) {
      CHECK(lm2_tail(t, seq, m, 30) <=
            3.0 * seq.A / (std::abs(t) * seq.at(m)) + 1e-12);
    }
  }
}
