#include <gtest/gtest.h>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/bessel_prime.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <complex>
#include <random>

#include "cascyl/scattering.hpp"

using namespace cascyl;
using namespace cascyl::scatter;
using Big = boost::multiprecision::cpp_bin_float_50;

namespace {

Big big_i(int n, const Big& z, bool prime) {
  return prime ? boost::math::cyl_bessel_i_prime(Big(n), z) : boost::math::cyl_bessel_i(Big(n), z);
}
Big big_k(int n, const Big& z, bool prime) {
  return prime ? boost::math::cyl_bessel_k_prime(Big(n), z) : boost::math::cyl_bessel_k(Big(n), z);
}

// Unscaled element in 50 digits, summed over p in [-40, 40].
double reference_element(const CylinderPair& pair, Bc bc, int m, int n, double xi) {
  const bool na = neumann_on_a(bc), nb = neumann_on_b(bc);
  const Big x(xi), za = Big(pair.a) * x, zb = Big(pair.b) * x;
  const Big delta = pair.kind == Kind::Interior ? Big(pair.b) - Big(pair.a) - Big(pair.d)
                                                : Big(pair.a) + Big(pair.b) + Big(pair.d);
  const Big zd = delta * x;
  Big sum = 0;
  for (int p = -40; p <= 40; ++p) {
    if (pair.kind == Kind::Interior) {
      sum += big_k(p, zb, nb) / big_i(p, zb, nb) * boost::math::cyl_bessel_i(Big(p - m), zd) *
             boost::math::cyl_bessel_i(Big(p - n), zd);
    } else {
      sum += big_i(p, zb, nb) / big_k(p, zb, nb) * boost::math::cyl_bessel_k(Big(p + m), zd) *
             boost::math::cyl_bessel_k(Big(p + n), zd);
    }
  }
  const Big unscaled = big_i(n, za, na) / big_k(m, za, na) * sum;
  return static_cast<double>(unscaled * exp(2 * Big(pair.d) * x));
}

double rel(double x, double ref) { return std::abs(x - ref) / std::abs(ref); }

}  // namespace

TEST(Scattering, ElementMatchesBigFloatOracle) {
  const CylinderPair in{Kind::Interior, 1.0, 2.0, 0.5};
  EXPECT_LT(rel(matrix_element(in, Bc::DD, 0, 0, 1.0), reference_element(in, Bc::DD, 0, 0, 1.0)), 1e-10);
  const CylinderPair ex{Kind::Exterior, 1.0, 1.5, 0.4};
  for (const auto& pair : {in, ex})
    for (Bc bc : kScalarBcs)
      for (auto [m, n, xi] : {std::tuple{0, 0, 1.0}, std::tuple{2, -1, 0.7}, std::tuple{-3, 4, 2.5}}) {
        const double ref = reference_element(pair, bc, m, n, xi);
        EXPECT_LT(rel(matrix_element(pair, bc, m, n, xi), ref), 1e-10)
            << (pair.kind == Kind::Interior ? "interior " : "exterior ") << to_string(bc) << " m=" << m
            << " n=" << n << " xi=" << xi;
      }
}

TEST(Scattering, ElementSigns) {
  const CylinderPair in{Kind::Interior, 1.0, 2.0, 0.3};
  EXPECT_GT(matrix_element(in, Bc::DD, 1, 2, 1.5), 0.0);
  EXPECT_GT(matrix_element(in, Bc::NN, 1, 2, 1.5), 0.0);
  EXPECT_LT(matrix_element(in, Bc::DN, 1, 2, 1.5), 0.0);
  EXPECT_LT(matrix_element(in, Bc::ND, 1, 2, 1.5), 0.0);
}

TEST(Scattering, ScaledElementBoundedAtLargeXi) {
  // The unscaled element would underflow long before these xi.
  const CylinderPair in{Kind::Interior, 1.0, 2.0, 0.1};
  double prev = 1.0;
  for (double xi : {50.0, 200.0, 800.0, 3200.0}) {
    const double s = matrix_element(in, Bc::DD, 0, 0, xi);
    EXPECT_TRUE(std::isfinite(s));
    EXPECT_GT(s, 0.0);
    EXPECT_LT(s, prev);
    prev = s;
  }
}

TEST(Scattering, BalancedMatrixIsSimilarToRoundTrip) {
  for (Kind k : {Kind::Interior, Kind::Exterior})
    for (Bc bc : kScalarBcs) {
      const CylinderPair pair{k, 0.8, 1.9, 0.3};
      const double xi = 1.7;
      const auto mat = build_matrix(pair, bc, xi, 3);
      const double za = pair.a * xi;
      auto ik = [&](int n) {  // |i_n k_n| at a xi, primed for Neumann on a
        return neumann_on_a(bc) ? std::abs(bessel::bessel_i_prime_scaled(n, za) * bessel::bessel_k_prime_scaled(n, za))
                                : bessel::bessel_i_scaled(n, za) * bessel::bessel_k_scaled(n, za);
      };
      for (int m = -3; m <= 3; ++m)
        for (int n = -3; n <= 3; ++n) {
          const double raw = matrix_element(pair, bc, m, n, xi);
          const double via = mat.entries(m + 3, n + 3) * std::sqrt(ik(n) / ik(m));
          EXPECT_LT(rel(via, raw), 1e-12) << to_string(bc) << " " << m << "," << n;
        }
    }
}

TEST(Scattering, BuildMatrixShapes) {
  const CylinderPair in{Kind::Interior, 1.0, 2.0, 0.2};
  const auto one = build_matrix(in, Bc::DD, 2.0, 0);
  ASSERT_EQ(one.entries.rows(), 1);
  EXPECT_LT(rel(one.entries(0, 0), matrix_element(in, Bc::DD, 0, 0, 2.0)), 1e-13);
  EXPECT_DOUBLE_EQ(one.prefactor_log, -2 * 0.2 * 2.0);
  const auto small = build_matrix(in, Bc::NN, 2.0, 2);
  const auto big = build_matrix(in, Bc::NN, 2.0, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      EXPECT_NEAR(small.entries(i, j), big.entries(i + 3, j + 3), 1e-14 * std::abs(big.entries(i + 3, j + 3)));
  EXPECT_LT((big.entries - big.entries.transpose()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Scattering, LogDetBasics) {
  EXPECT_EQ(log_det_one_minus(Eigen::MatrixXd::Zero(4, 4), -1.0), 0.0);
  Eigen::MatrixXd one(1, 1);
  one << 0.7;
  EXPECT_NEAR(log_det_one_minus(one, -0.5), std::log(1 - 0.7 * std::exp(-0.5)), 1e-15);
  one << 2.0;
  EXPECT_THROW(log_det_one_minus(one, 0.0), NonPositiveDeterminant);
}

TEST(Scattering, LogDetMatchesEigenvalueProduct) {
  std::mt19937_64 rng(1234);
  std::normal_distribution<double> g;
  Eigen::MatrixXd a(6, 6);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) a(i, j) = g(rng);
  Eigen::EigenSolver<Eigen::MatrixXd> es0(a);
  a *= 0.5 / es0.eigenvalues().cwiseAbs().maxCoeff();
  Eigen::EigenSolver<Eigen::MatrixXd> es(a);
  std::complex<double> prod = 1.0;
  for (int i = 0; i < 6; ++i) prod *= 1.0 - es.eigenvalues()[i];
  EXPECT_NEAR(log_det_one_minus(a, 0.0), std::log(prod.real()), 1e-12);
  EXPECT_NEAR(prod.imag(), 0.0, 1e-12);
}

TEST(Scattering, ParitySplitMatchesFullDeterminant) {
  for (Kind k : {Kind::Interior, Kind::Exterior})
    for (Bc bc : kScalarBcs) {
      const CylinderPair pair{k, 1.0, 2.0, 0.25};
      for (double xi : {0.05, 1.0, 6.0}) {
        const double full = log_det_one_minus(build_matrix(pair, bc, xi, 8));
        EXPECT_NEAR(log_det_at(pair, bc, xi, 8), full, 1e-13 * std::max(1.0, std::abs(full)));
      }
    }
}

TEST(Scattering, LargeXiSingleElementDominance) {
  const CylinderPair in{Kind::Interior, 1.0, 2.0, 0.1};
  const double xi = 20.0 / in.d;
  const auto mat = build_matrix(in, Bc::DD, xi, 20);
  const double m00 = mat.entries(20, 20) * std::exp(mat.prefactor_log);
  const double ld = log_det_one_minus(mat);
  EXPECT_NEAR(ld, -m00, 1e-6);
  EXPECT_NEAR(ld / -(mat.entries.trace() * std::exp(mat.prefactor_log)), 1.0, 1e-12);
}

TEST(Scattering, TruncationMonotone) {
  for (Bc bc : {Bc::DD, Bc::NN})
    for (Kind k : {Kind::Interior, Kind::Exterior}) {
      const CylinderPair pair{k, 1.0, 2.0, 0.2};
      for (double xi : {0.1, 2.0, 10.0}) {
        double prev = 0.0;
        for (int N = 0; N <= 24; N += 3) {
          const double v = std::abs(log_det_at(pair, bc, xi, N));
          EXPECT_GE(v, prev * (1 - 1e-14)) << "N=" << N << " xi=" << xi;
          prev = v;
        }
      }
    }
}

TEST(Scattering, PWindowIsConverged) {
  const CylinderPair pair{Kind::Exterior, 1.0, 3.0, 0.2};
  ScatteringOptions loose, tight;
  tight.p_tol = 1e-30;
  for (double xi : {0.3, 4.0})
    EXPECT_NEAR(log_det_at(pair, Bc::DD, xi, 20, loose), log_det_at(pair, Bc::DD, xi, 20, tight),
                1e-14 * std::abs(log_det_at(pair, Bc::DD, xi, 20, tight)));
}

TEST(Scattering, Errors) {
  const CylinderPair in{Kind::Interior, 1.0, 2.0, 0.2};
  ScatteringOptions tiny;
  tiny.p_cap_factor = 0.05;
  EXPECT_THROW(matrix_element(in, Bc::DD, 0, 0, 30.0, 1e-15, tiny), PSumNoConvergence);
  EXPECT_THROW(build_matrix(in, Bc::DD, 30.0, 10, tiny), PSumNoConvergence);
  EXPECT_THROW(matrix_element(in, Bc::PCPC, 0, 0, 1.0), DomainError);
  EXPECT_THROW(casimir_energy_exact(in, Bc::DD, 1e-12), DomainError);
  EXPECT_THROW(casimir_energy_exact({Kind::Interior, 1.0, 2.0, 1.5}, Bc::DD), InvalidGeometry);
  ScatteringOptions capped;
  capped.n_cap = 4;
  try {
    casimir_energy_exact(in, Bc::DD, 1e-8, capped);
    ADD_FAILURE() << "expected NoConvergence";
  } catch (const EnergyNoConvergence& e) {
    EXPECT_FALSE(e.partial.converged);
    EXPECT_EQ(e.partial.n_matrix, 4);
    EXPECT_LT(e.partial.value_per_length, 0.0);
  }
  EXPECT_THROW(casimir_force_exact({Kind::Interior, 1.0, 2.0, 0.998}, Bc::DD), StencilDomain);
}

TEST(Scattering, EnergySignsAndMonotonicity) {
  const CylinderPair base{Kind::Interior, 1.0, 2.0, 0.0};
  const auto dd2 = casimir_energy_exact(base.with_gap(0.2), Bc::DD, 1e-6);
  const auto dd4 = casimir_energy_exact(base.with_gap(0.4), Bc::DD, 1e-6);
  EXPECT_LT(dd2.value_per_length, 0.0);
  EXPECT_LT(std::abs(dd4.value_per_length), std::abs(dd2.value_per_length));
  EXPECT_TRUE(dd2.converged);
  EXPECT_LE(dd2.err_est, 1e-6 * std::abs(dd2.value_per_length));
  EXPECT_GT(casimir_energy_exact(base.with_gap(0.2), Bc::DN, 1e-6).value_per_length, 0.0);
  EXPECT_GT(casimir_energy_exact(base.with_gap(0.2), Bc::ND, 1e-6).value_per_length, 0.0);
  EXPECT_LT(casimir_energy_exact(base.with_gap(0.2), Bc::NN, 1e-6).value_per_length, 0.0);
}

TEST(Scattering, ReferenceEnergy) {
  // Close to the small-gap prediction -5.454 (leading -5.1068 times 1 + 0.680556 d).
  const auto r = casimir_energy_exact({Kind::Interior, 1.0, 2.0, 0.1}, Bc::DD, 1e-6);
  EXPECT_NEAR(r.value_per_length, -5.454, 0.03 * 5.454);
}

TEST(Scattering, ExteriorSwapSymmetry) {
  const CylinderPair p{Kind::Exterior, 1.0, 1.6, 0.4};
  const double tol = 1e-7;
  const double dd = casimir_energy_exact(p, Bc::DD, tol).value_per_length;
  EXPECT_NEAR(casimir_energy_exact(p.swapped(), Bc::DD, tol).value_per_length, dd, 3 * tol * std::abs(dd));
  const double dn = casimir_energy_exact(p, Bc::DN, tol).value_per_length;
  EXPECT_NEAR(casimir_energy_exact(p.swapped(), Bc::ND, tol).value_per_length, dn, 3 * tol * std::abs(dn));
}

TEST(Scattering, ForceMatchesFivePointDifference) {
  const CylinderPair p{Kind::Interior, 1.0, 2.0, 0.3};
  const auto f = casimir_force_exact(p, Bc::DD, 1e-8);
  const double h = 1e-3;
  auto e = [&](double dd) { return casimir_energy_exact(p.with_gap(0.3 + dd), Bc::DD, 1e-10).value_per_length; };
  const double five_point = -(8 * (e(h) - e(-h)) - (e(2 * h) - e(-2 * h))) / (12 * h);
  EXPECT_NEAR(f.value_per_length, five_point, f.err_est + 1e-6 * std::abs(five_point));
  EXPECT_LT(f.value_per_length, 0.0);
  EXPECT_GT(casimir_force_exact(p, Bc::DN, 1e-6).value_per_length, 0.0);
}

TEST(Scattering, DeterministicAcrossThreadCounts) {
  const CylinderPair p{Kind::Exterior, 1.0, 2.0, 0.3};
  ScatteringOptions one, three;
  three.threads = 3;
  const auto a = casimir_energy_exact(p, Bc::NN, 1e-6, one);
  const auto b = casimir_energy_exact(p, Bc::NN, 1e-6, three);
  EXPECT_EQ(a.value_per_length, b.value_per_length);
  EXPECT_EQ(a.err_est, b.err_est);
  EXPECT_EQ(a.n_matrix, b.n_matrix);
}
