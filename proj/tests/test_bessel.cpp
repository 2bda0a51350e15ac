#include <gtest/gtest.h>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>

#include "cascyl/bessel.hpp"

using namespace cascyl;
using namespace cascyl::bessel;
using Big = boost::multiprecision::cpp_bin_float_50;

namespace {

// Independent 50-digit references: log of the scaled functions.
double ref_log_i(int n, double z) {
  const Big zb(z);
  Big v = boost::math::cyl_bessel_i(Big(n), zb);
  return static_cast<double>(log(v) - zb);
}

double ref_log_k(int n, double z) {
  const Big zb(z);
  Big v = boost::math::cyl_bessel_k(Big(n), zb);
  return static_cast<double>(log(v) + zb);
}

// Ascending series in 50 digits, used for the small-order spot values.
Big series_i(int n, const Big& z) {
  Big y = z * z / 4, term = pow(z / 2, n), sum = 0;
  for (int k = 1; k <= n; ++k) term /= k;
  for (int k = 0; k < 200; ++k) {
    sum += term;
    term *= y / ((k + 1) * Big(n + k + 1));
  }
  return sum;
}

double rel(double x, double ref) { return std::abs(x - ref) / std::abs(ref); }

}  // namespace

TEST(Bessel, SpotValues) {
  EXPECT_NEAR(bessel_i_scaled(0, 1.0), 0.4657596075936404, 1e-15);
  EXPECT_EQ(bessel_i_scaled(0, 0.0), 1.0);
  EXPECT_EQ(bessel_i_scaled(3, 0.0), 0.0);
  EXPECT_NEAR(bessel_k_scaled(0, 1.0), 1.1444630798068949, 1e-14);
  EXPECT_NEAR(bessel_k_scaled(1, 1.0), 1.6361534862632582, 1e-14);
  EXPECT_LT(rel(bessel_k_scaled(0, 100.0), std::sqrt(M_PI / 200.0)), 2e-3);
}

TEST(Bessel, SpotValuesAgainstBigSeries) {
  const Big one(1);
  const double i0 = static_cast<double>(series_i(0, one) * exp(-one));
  const double i1 = static_cast<double>(series_i(1, one) * exp(-one));
  EXPECT_LT(rel(bessel_i_scaled(0, 1.0), i0), 1e-12);
  EXPECT_LT(rel(bessel_i_scaled(1, 1.0), i1), 1e-12);
  EXPECT_LT(rel(bessel_k_scaled(0, 1.0), std::exp(ref_log_k(0, 1.0))), 1e-12);
  EXPECT_LT(rel(bessel_k_scaled(1, 1.0), std::exp(ref_log_k(1, 1.0))), 1e-12);
}

TEST(Bessel, Derivatives) {
  EXPECT_NEAR(bessel_i_prime_scaled(0, 1.0), 0.5651591039924851 * std::exp(-1.0), 1e-15);
  EXPECT_NEAR(bessel_i_prime_scaled(1, 1e-12), 0.5, 1e-11);
  EXPECT_NEAR(bessel_k_prime_scaled(0, 1.0), -1.6361534862632582, 1e-14);
  const double k0 = bessel_k_scaled(0, 1.0), k2 = bessel_k_scaled(2, 1.0);
  EXPECT_LT(rel(bessel_k_prime_scaled(1, 1.0), -0.5 * (k0 + k2)), 1e-14);
  for (int n : {0, 1, 7, 60, 150, 900})
    for (double z : {1e-3, 0.7, 13.0, 800.0}) EXPECT_LT(bessel_k_prime_scaled(n, z), 0.0);

  // Central difference of the unscaled I_5 at z = 10.
  const double h = 1e-4;
  auto I5 = [](double z) { return bessel_i_scaled(5, z) * std::exp(z); };
  const double fd = (I5(10.0 + h) - I5(10.0 - h)) / (2 * h);
  EXPECT_LT(rel(bessel_i_prime_scaled(5, 10.0) * std::exp(10.0), fd), 1e-8);
}

TEST(Bessel, AgainstMultiprecisionGrid) {
  const int orders[] = {0, 1, 2, 5, 17, 60, 99, 100, 101, 250, 700, 2000};
  const double args[] = {1e-8, 1e-3, 0.3, 1.9, 2.1, 9.5, 55.0, 420.0, 3000.0, 1e5};
  for (int n : orders) {
    for (double z : args) {
      const double li = log_bessel_i_scaled(n, z), lk = log_bessel_k_scaled(n, z);
      const double ri = ref_log_i(n, z), rk = ref_log_k(n, z);
      // Relative error of the value = absolute error of its log; the log
      // itself cannot be stored better than a few ulps of its magnitude.
      EXPECT_LT(std::abs(li - ri), 1e-13 + 8e-16 * std::abs(ri)) << "I n=" << n << " z=" << z;
      EXPECT_LT(std::abs(lk - rk), 1e-13 + 8e-16 * std::abs(rk)) << "K n=" << n << " z=" << z;
    }
  }
}

TEST(Bessel, TableMatchesScalar) {
  for (double z : {1e-4, 0.5, 3.0, 40.0, 900.0}) {
    OrderTable t(z, 400);
    for (int n : {0, 1, 3, 50, 99, 100, 260, 400}) {
      EXPECT_NEAR(t.log_i(n), log_bessel_i_scaled(n, z), 1e-12 * std::max(1.0, std::abs(t.log_i(n))));
      EXPECT_NEAR(t.log_k(n), log_bessel_k_scaled(n, z), 1e-12 * std::max(1.0, std::abs(t.log_k(n))));
      EXPECT_NEAR(t.log_i_prime(n), log_bessel_i_prime_scaled(n, z), 1e-12 * std::max(1.0, std::abs(t.log_i(n))));
      EXPECT_NEAR(t.log_k_prime_abs(n), log_bessel_k_prime_scaled_abs(n, z),
                  1e-12 * std::max(1.0, std::abs(t.log_k(n))));
    }
  }
}

TEST(Bessel, Wronskian) {
  // i_n k_n' - i_n' k_n = -1/z, evaluated in logs to survive extreme orders.
  double worst = 0.0;
  for (int a = 0; a < 20; ++a) {
    const int n = static_cast<int>(std::lround(std::pow(500.0, a / 19.0))) - (a == 0 ? 1 : 0);
    for (int b = 0; b < 20; ++b) {
      const double z = std::pow(10.0, -3.0 + 6.0 * b / 19.0);
      const double l1 = log_bessel_i_scaled(n, z) + log_bessel_k_prime_scaled_abs(n, z);
      const double l2 = log_bessel_i_prime_scaled(n, z) + log_bessel_k_scaled(n, z);
      const double lz = -std::log(z);
      const double resid = std::abs(std::exp(l1 - lz) + std::exp(l2 - lz) - 1.0);
      worst = std::max(worst, resid);
    }
  }
  EXPECT_LT(worst, 1e-12);
}

TEST(Bessel, RecurrenceResidual) {
  for (int n : {1, 4, 30, 99, 100, 101, 300, 1500}) {
    for (double z : {0.01, 1.0, 30.0, 500.0, 1800.0, 5000.0}) {
      const double lo = bessel_i_scaled(n - 1, z);
      const double resid = std::abs(lo - bessel_i_scaled(n + 1, z) - (2.0 * n / z) * bessel_i_scaled(n, z));
      EXPECT_LE(resid, 1e-12 * lo) << n << " " << z;
    }
  }
}

TEST(Bessel, OrderSymmetryAndMonotonicity) {
  for (int n : {1, 3, 120}) {
    EXPECT_EQ(bessel_i_scaled(-n, 2.5), bessel_i_scaled(n, 2.5));
    EXPECT_EQ(bessel_k_scaled(-n, 2.5), bessel_k_scaled(n, 2.5));
    EXPECT_EQ(bessel_i_prime_scaled(-n, 2.5), bessel_i_prime_scaled(n, 2.5));
  }
  for (double z : {0.1, 4.0, 300.0})
    for (int n = 1; n < 140; ++n) {
      EXPECT_LE(log_bessel_i_scaled(n, z), log_bessel_i_scaled(n - 1, z));
      EXPECT_GE(log_bessel_k_scaled(n, z), log_bessel_k_scaled(n - 1, z));
    }
}

TEST(Bessel, DomainErrors) {
  EXPECT_THROW(bessel_i_scaled(0, -1.0), DomainError);
  EXPECT_THROW(bessel_i_scaled(0, INFINITY), DomainError);
  EXPECT_THROW(bessel_k_scaled(0, 0.0), DomainError);
  EXPECT_THROW(bessel_k_prime_scaled(2, -3.0), DomainError);
  EXPECT_THROW(OrderTable(0.0, 4), DomainError);
}

TEST(Bessel, DebyeFirstPolynomials) {
  const auto& p = detail::debye_polynomials();
  for (double t : {0.1, 0.5, 0.9, 1.0}) {
    EXPECT_NEAR(detail::eval_poly(p.u[1], t), (3 * t - 5 * t * t * t) / 24, 1e-16);
    EXPECT_NEAR(detail::eval_poly(p.v[1], t), (7 * t * t * t - 9 * t) / 24, 1e-16);
  }
  EXPECT_NEAR(detail::eval_poly(p.u[2], 1.0), 1.0 / 288.0, 1e-16);
}
