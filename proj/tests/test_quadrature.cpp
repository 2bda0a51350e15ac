#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "cascyl/quadrature.hpp"

using namespace cascyl;
using namespace cascyl::quad;

TEST(Quadrature, FinitePolynomial) {
  auto r = integrate_finite([](double t) { return (40 * t * t + 3) / 24; }, 0.0, 1.0);
  EXPECT_NEAR(r.value, 7.0 / 12 + 7.0 / 72, 1e-14);
  EXPECT_NEAR(integrate_finite([](double) { return 1.0; }, 0.0, 1.0).value, 1.0, 1e-15);
}

TEST(Quadrature, FiniteSqrtSingularity) {
  // int_1^{1e6} u^-4 (u-1)^-1/2 du; the tail beyond 1e6 is below 1e-21.
  QuadratureSpec spec;
  spec.rel_tol = 1e-12;
  spec.max_doublings = 16;
  auto r = integrate_finite([](double u) { return std::pow(u, -4.0) / std::sqrt(u - 1.0); }, 1.0, 1e6, spec);
  EXPECT_NEAR(r.value, 5 * std::numbers::pi / 16, 1e-9);
  EXPECT_LE(r.err_est, 1e-12 * r.value);
}

TEST(Quadrature, SemiInfinite) {
  QuadratureSpec spec;
  spec.decay_rate = 2.0;
  spec.rel_tol = 1e-12;
  EXPECT_NEAR(integrate_semi_infinite([](double x) { return std::exp(-2 * x); }, spec).value, 0.5, 1e-12);
  spec.decay_rate = 1.0;
  spec.rel_tol = 1e-10;
  spec.max_doublings = 16;
  EXPECT_NEAR(integrate_semi_infinite([](double x) { return x * x * x * std::exp(-x); }, spec).value, 6.0, 1e-8);
}

TEST(Quadrature, GammaIdentityForMIntegral) {
  // int_0^inf m^{3/2} exp(-2 (s+1) eps m / (alpha tau)) dm at s=0, eps=0.1, alpha=tau=1.
  const double rate = 0.2;
  QuadratureSpec spec;
  spec.decay_rate = rate;
  spec.rel_tol = 1e-11;
  spec.max_doublings = 16;
  auto r = integrate_semi_infinite([&](double m) { return std::pow(m, 1.5) * std::exp(-rate * m); }, spec);
  const double expect = 0.75 * std::sqrt(std::numbers::pi) * std::pow(5.0, 2.5);
  EXPECT_NEAR(r.value, expect, 1e-8 * expect);
  EXPECT_NEAR(expect, 74.312387, 1e-5);
}

TEST(Quadrature, NoConvergenceIsReported) {
  QuadratureSpec spec;
  spec.rel_tol = 1e-14;
  spec.max_doublings = 2;
  spec.base_nodes = 2;
  EXPECT_THROW(integrate_finite([](double x) { return std::sin(200 * x); }, 0.0, 3.0, spec), NoConvergence);
}

TEST(Quadrature, InvalidSpec) {
  QuadratureSpec spec;
  spec.base_nodes = 1;
  EXPECT_THROW(integrate_finite([](double) { return 1.0; }, 0.0, 1.0, spec), DomainError);
  EXPECT_THROW(integrate_finite([](double) { return 1.0; }, 1.0, 0.0), DomainError);
}

TEST(Quadrature, HermiteMoments) {
  EXPECT_NEAR(gauss_hermite([](double q) { return q * q; }, 1.0, 8), std::sqrt(std::numbers::pi) / 2, 1e-15);
  EXPECT_NEAR(gauss_hermite([](double q) { return q * q * q; }, 2.0, 8), 0.0, 1e-15);
  // Shifted centre: int exp(-4 (q-7)^2) dq.
  EXPECT_NEAR(gauss_hermite([](double) { return 1.0; }, 4.0, 5, 7.0), std::sqrt(std::numbers::pi / 4), 1e-15);
  EXPECT_THROW(gauss_hermite([](double) { return 1.0; }, 0.0, 4), DomainError);
}

TEST(Quadrature, HermiteExactness) {
  // k nodes integrate q^{2k-2} exp(-q^2) exactly: Gamma(k - 1/2).
  for (int k = 1; k <= 30; ++k) {
    const double got = gauss_hermite([&](double q) { return std::pow(q, 2 * k - 2); }, 1.0, k);
    const double expect = std::tgamma(k - 0.5);
    EXPECT_NEAR(got, expect, 1e-13 * expect) << k;
  }
}

TEST(Quadrature, HermiteRefinementMonotone) {
  // Doubling the node count never makes the polynomial error worse.
  for (int deg : {2, 6, 10, 14, 20}) {
    const double expect = std::tgamma((deg + 1) / 2.0);
    double prev_err = INFINITY;
    for (int n : {2, 4, 8, 16, 32}) {
      const double err =
          std::abs(gauss_hermite([&](double q) { return std::pow(q, deg); }, 1.0, n) - expect) / expect;
      EXPECT_LE(err, std::max(prev_err, 1e-13)) << deg << " " << n;
      prev_err = err;
    }
  }
}

TEST(Quadrature, LegendreRule) {
  const Rule r = gauss_legendre(32);
  double s = 0.0;
  for (double w : r.w) s += w;
  EXPECT_NEAR(s, 2.0, 1e-14);
  EXPECT_NEAR(r.apply([](double x) { return std::pow(x, 62); }), 2.0 / 63, 1e-15);
}
