#pragma once

// Self-checks behind `casimir_cyl verify`: each check reduces a property
// over a grid to one worst-case number and compares it with a threshold.

#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "cascyl/asymptotics.hpp"
#include "cascyl/bessel.hpp"
#include "cascyl/oracle.hpp"
#include "cascyl/pfa.hpp"
#include "cascyl/quadrature.hpp"

namespace cascyl::verify {

enum class Level { Fast, Slow };

struct Check {
  std::string suite;
  std::string name;
  double measured = 0.0;   // worst deviation found
  double threshold = 0.0;  // pass iff measured <= threshold
  double seconds = 0.0;
  bool passed = false;
};

using Report = std::vector<Check>;

namespace detail {

inline Check run(const std::string& suite, const std::string& name, double threshold,
                 const std::function<double()>& measure) {
  Check c{suite, name, 0.0, threshold};
  const auto t0 = std::chrono::steady_clock::now();
  try {
    c.measured = measure();
    c.passed = c.measured <= threshold;  // NaN fails
  } catch (const std::exception&) {
    c.measured = INFINITY;
    c.passed = false;
  }
  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return c;
}

inline double rel_dev(double x, double ref) { return std::abs(x - ref) / std::max(1.0, std::abs(ref)); }

// Power series at x = 1 in long double, independent of the evaluation paths
// used by the library.
struct SeriesSpot {
  long double i0, i1, k0, k1;
};

inline SeriesSpot series_spot(long double x) {
  const long double gamma = 0.57721566490153286060651209008240243L;
  const long double q = x * x / 4;
  long double i0 = 0, i1 = 0, k0s = 0, k1s = 0, term0 = 1, term1 = 1, h = 0;
  for (int k = 0; k < 60; ++k) {
    if (k > 0) {
      term0 *= q / (static_cast<long double>(k) * k);
      term1 *= q / (static_cast<long double>(k) * (k + 1));
      h += 1.0L / k;
    }
    i0 += term0;
    i1 += term1;
    k0s += term0 * h;
    k1s += term1 * (2 * h + 1.0L / (k + 1));  // psi(k+1) + psi(k+2) + 2 gamma
  }
  i1 *= x / 2;
  const long double lg = std::log(x / 2);
  SeriesSpot s;
  s.i0 = i0;
  s.i1 = i1;
  s.k0 = -(lg + gamma) * i0 + k0s;
  s.k1 = 1 / x + lg * i1 - (x / 4) * (k1s - 2 * gamma * (i1 * 2 / x));
  return s;
}

}  // namespace detail

/// Wronskian on 20 orders n <= 500 times 20 arguments in [1e-3, 1e3].
inline double wronskian_residual() {
  double worst = 0.0;
  for (int a = 0; a < 20; ++a) {
    const int n = static_cast<int>(std::lround(std::pow(500.0, a / 19.0))) - (a == 0 ? 1 : 0);
    for (int b = 0; b < 20; ++b) {
      const double z = std::pow(10.0, -3.0 + 6.0 * b / 19.0);
      // i_n k_n' - i_n' k_n = -1/z, in logs
      const double l1 = bessel::log_bessel_i_scaled(n, z) + bessel::log_bessel_k_prime_scaled_abs(n, z);
      const double l2 = bessel::log_bessel_i_prime_scaled(n, z) + bessel::log_bessel_k_scaled(n, z);
      const double lz = -std::log(z);
      worst = std::max(worst, std::abs(std::exp(l1 - lz) + std::exp(l2 - lz) - 1.0));
    }
  }
  return worst;
}

/// Largest relative error of I0, I1, K0, K1 at z = 1 against power series.
inline double bessel_spot_error() {
  const auto s = detail::series_spot(1.0L);
  const double e = std::exp(1.0);
  auto r = [](double x, long double ref) { return static_cast<double>(std::abs(x - ref) / std::abs(ref)); };
  return std::max({r(bessel::bessel_i_scaled(0, 1.0) * e, s.i0), r(bessel::bessel_i_scaled(1, 1.0) * e, s.i1),
                   r(bessel::bessel_k_scaled(0, 1.0) / e, s.k0), r(bessel::bessel_k_scaled(1, 1.0) / e, s.k1)});
}

inline double bessel_recurrence_residual() {
  double worst = 0.0;
  for (int n : {1, 4, 30, 99, 100, 101, 300, 1500})
    for (double z : {0.01, 1.0, 30.0, 500.0, 1800.0}) {
      const double lo = bessel::bessel_i_scaled(n - 1, z);
      if (lo == 0.0) continue;
      const double resid =
          std::abs(lo - bessel::bessel_i_scaled(n + 1, z) - (2.0 * n / z) * bessel::bessel_i_scaled(n, z));
      worst = std::max(worst, resid / lo);
    }
  return worst;
}

/// |int_1^inf u^-4 (u-1)^-1/2 du - 5 pi / 16| via u = 1 + tan^2(phi).
inline double pfa_constant_error() {
  auto f = [](double phi) {
    const double t = std::tan(phi);
    const double u = 1.0 + t * t;
    return 2.0 / (u * u * u);
  };
  quad::QuadratureSpec spec;
  spec.rel_tol = 1e-13;
  return std::abs(quad::integrate_finite(f, 0.0, std::numbers::pi / 2, spec).value - 5 * std::numbers::pi / 16);
}

inline double q_integration_error(int points = 200) {
  std::mt19937_64 rng(20261015);
  std::uniform_real_distribution<double> um(0.2, 3.0), ut(0.05, 1.0), ue(0.0, 0.5), ua(0.3, 3.0), un(-2.0, 2.0);
  double worst = 0.0;
  for (int trial = 0; trial < points; ++trial) {
    const auto p = oracle::make_point(0, um(rng), ut(rng), ue(rng), ua(rng));
    const double n = un(rng), np = un(rng);
    for (Bc bc : kScalarBcs) {
      worst = std::max(worst, detail::rel_dev(oracle::g_hat_numeric(bc, p, n, np), oracle::g_hat_closed(bc, p, n, np)));
      worst = std::max(worst, detail::rel_dev(oracle::h_hat_numeric(bc, p, n, np),
                                              oracle::k_frak_closed(bc, p, n, np) + oracle::f_frak(bc, p)));
    }
  }
  return worst;
}

/// b_s numeric vs closed over the 27-point (m, tau, eps) grid, alpha in {0.5, 1, 2}.
inline double b_s_error(int s_max) {
  double worst = 0.0;
  for (double alpha : {0.5, 1.0, 2.0})
    for (double m : {0.5, 1.0, 2.5})
      for (double tau : {0.2, 0.6, 1.0})
        for (double eps : {0.0, 0.05, 0.3})
          for (int s = 0; s <= s_max; ++s)
            for (Bc bc : kScalarBcs) {
              const auto p = oracle::make_point(s, m, tau, eps, alpha);
              worst = std::max(worst, detail::rel_dev(oracle::b_s_numeric(bc, s, p), oracle::b_s_closed(bc, p)));
            }
  return worst;
}

inline double partition_error(int s_max = 6) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> ui(-9, 9);
  double worst = 0.0;
  for (int s = 1; s <= s_max; ++s)
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> n(s);
      for (double& x : n) x = ui(rng);
      const double lhs = oracle::path_sum(n);
      worst = std::max({worst, detail::rel_dev(oracle::partition_forward(n), lhs),
                        detail::rel_dev(oracle::partition_reversed(n), lhs)});
    }
  return worst;
}

inline double odd_term_residual(int s_max) {
  double worst = 0.0;
  for (int s = 0; s <= s_max; ++s)
    for (Bc bc : kScalarBcs)
      worst = std::max(worst, std::abs(oracle::odd_term_integral(bc, s, oracle::make_point(s, 0.9, 0.6, 0.2, 1.5))));
  return worst;
}

inline double formal_substitution_error(int s_max) {
  double worst = 0.0;
  for (int s = 1; s <= s_max; ++s)
    for (Bc bc : kScalarBcs) {
      const auto p = oracle::make_point(s, 1.4, 0.8, 0.1, 0.7);
      for (int i : {0, s})
        worst = std::max(worst,
                         detail::rel_dev(oracle::i_term_generic(bc, s, i, p), oracle::i_term_full(bc, s, i, p)));
    }
  return worst;
}

inline double zeta_constant_error() {
  const double pi4 = std::pow(std::numbers::pi, 4);
  const double z0 = oracle::e0_coefficient_check(0), z1 = oracle::e0_coefficient_check(1);
  return std::max({std::abs(z0 - pi4 / 90), std::abs(z1 - 7 * pi4 / 720), std::abs(z1 / z0 - 7.0 / 8.0)});
}

/// e1_from_b against the closed brackets for b/a in {1.5, 2, 4}.
inline double bracket_error() {
  double worst = 0.0;
  for (double b : {1.5, 2.0, 4.0})
    for (Bc bc : kScalarBcs) {
      const CylinderPair q{Kind::Interior, 1.0, b, 0.01};
      worst = std::max(worst, detail::rel_dev(oracle::e1_from_b(q, bc).theta1, asym::energy_expansion(q, bc).bracket));
    }
  return worst;
}

/// Number of grid points where the unified expansion breaks its sign
/// pattern: like conditions attract, mixed ones repel, for energy and force,
/// and the force bracket sign agrees with the PFA bias classification.
inline double sign_pattern_violations() {
  int bad = 0;
  for (Kind k : {Kind::Interior, Kind::Exterior})
    for (double a : {0.2, 1.0, 3.0})
      for (double b : {0.5, 1.5, 4.0, 20.0}) {
        if (k == Kind::Interior && b <= a + 0.02) continue;
        for (Bc bc : kAllBcs)
          for (double d : {1e-3, 1e-2}) {
            const CylinderPair p{k, a, b, d};
            const double sgn = parity(bc) ? 1.0 : -1.0;
            const auto e = asym::energy_expansion(p, bc), f = asym::force_expansion(p, bc);
            if (!(e.amplitude * sgn > 0) || !(f.amplitude * sgn > 0)) ++bad;
            const auto bias = asym::classify_pfa_bias(p, bc);
            if (bias != asym::PfaBias::Boundary &&
                (f.bracket > 0) != (bias == asym::PfaBias::Underestimates))
              ++bad;
          }
      }
  return bad;
}

/// Leading force amplitude vs PFA closed form; any bit difference counts.
inline double pfa_amplitude_mismatches() {
  int bad = 0;
  for (Kind k : {Kind::Interior, Kind::Exterior})
    for (Bc bc : kAllBcs) {
      const CylinderPair p{k, 1.0, 2.0, 0.01};
      if (asym::force_expansion(p, bc).amplitude != pfa::pfa_force_leading(p, bc).force_per_length) ++bad;
    }
  return bad;
}

/// Worst relative deviation of the two-cylinder brackets from the
/// cylinder-plate one at b = b_large, over all scalar bcs and both geometries.
inline double cylinder_plate_deviation(double b_large) {
  double worst = 0.0;
  for (Bc bc : kScalarBcs) worst = std::max(worst, asym::limit_consistency_check(1.0, b_large, bc));
  return worst;
}

/// Change of (deviation * b/a) between b = 1e3 and 1e6: the deviation is O(a/b).
inline double cylinder_plate_scaling() {
  double worst = 0.0;
  for (Bc bc : kScalarBcs) {
    const double c3 = asym::limit_consistency_check(1.0, 1e3, bc) * 1e3;
    const double c6 = asym::limit_consistency_check(1.0, 1e6, bc) * 1e6;
    worst = std::max(worst, std::abs(c3 - c6) / c6);
  }
  return worst;
}

/// PFA integral / closed leading term - 1 at d = 1e-3 (should be O(d)).
inline double pfa_integral_leading_gap() {
  double worst = 0.0;
  for (Kind k : {Kind::Interior, Kind::Exterior}) {
    const CylinderPair p{k, 1.0, 2.0, 1e-3};
    worst = std::max(worst, std::abs(pfa::pfa_force_integral(p, Bc::DD).force_per_length /
                                         pfa::pfa_force_leading(p, Bc::DD).force_per_length -
                                     1.0));
  }
  return worst;
}

inline Report bessel_suite(Level) {
  return {detail::run("bessel", "wronskian n<=500 z in [1e-3,1e3] (400 points)", 1e-12, wronskian_residual),
          detail::run("bessel", "I0 I1 K0 K1 at z=1 vs power series", 1e-12, bessel_spot_error),
          detail::run("bessel", "three-term recurrence residual", 1e-12, bessel_recurrence_residual)};
}

inline Report oracle_suite(Level level) {
  const bool slow = level == Level::Slow;
  const int s_max = slow ? 3 : 2;
  Report r{
      detail::run("oracle", "zeta constants pi^4/90, 7pi^4/720, ratio 7/8", 1e-12, zeta_constant_error),
      detail::run("oracle", "q-integrals match closed forms (200 points x 4 bcs)", 1e-11, [] { return q_integration_error(); }),
      detail::run("oracle", "b_s numeric vs closed, s<=" + std::to_string(s_max), 1e-8, [=] { return b_s_error(s_max); }),
      detail::run("oracle", "partition identities s<=6", 1e-12, [] { return partition_error(); }),
      detail::run("oracle", "odd terms integrate to zero", 1e-12, [=] { return odd_term_residual(s_max); }),
      detail::run("oracle", "generic-index integral at i=0 and i=s", 1e-8, [=] { return formal_substitution_error(s_max); })};
  if (slow) r.push_back(detail::run("oracle", "brackets from b_s series", 1e-6, bracket_error));
  return r;
}

inline Report asymptotics_suite(Level) {
  return {detail::run("asymptotics", "sign pattern grid", 0.0, sign_pattern_violations),
          detail::run("asymptotics", "leading force amplitude equals PFA bit for bit", 0.0, pfa_amplitude_mismatches),
          detail::run("asymptotics", "PFA plate constant 5pi/16", 1e-10, pfa_constant_error),
          detail::run("asymptotics", "PFA integral approaches leading term at d=1e-3", 1e-2, pfa_integral_leading_gap),
          detail::run("asymptotics", "cylinder-plate deviation scales as a/b", 1e-2, cylinder_plate_scaling)};
}

inline Report run_suite(const std::string& suite, Level level) {
  Report out;
  auto add = [&](Report r) { out.insert(out.end(), r.begin(), r.end()); };
  if (suite == "bessel" || suite == "all") add(bessel_suite(level));
  if (suite == "oracle" || suite == "all") add(oracle_suite(level));
  if (suite == "asymptotics" || suite == "all") add(asymptotics_suite(level));
  if (out.empty()) throw DomainError("unknown suite '" + suite + "'");
  return out;
}

}  // namespace cascyl::verify
