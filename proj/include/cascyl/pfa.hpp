#pragma once

// Proximity force approximation for two parallel cylinders: the parallel
// plate force density integrated over one cylinder surface, and its d -> 0
// closed form.

#include <cmath>
#include <numbers>

#include "cascyl/geometry.hpp"
#include "cascyl/quadrature.hpp"

namespace cascyl::pfa {

enum class Method { Integral, LeadingClosedForm };

struct PfaResult {
  double force_per_length = 0.0;
  Method method = Method::Integral;
  double err_est = 0.0;
};

/// Multiple of the DD plate result carried by each boundary pair.
constexpr double bc_factor(Bc bc) {
  switch (bc) {
    case Bc::DD:
    case Bc::NN: return 1.0;
    case Bc::DN:
    case Bc::ND: return -7.0 / 8.0;
    case Bc::PCPC: return 2.0;
    case Bc::PCIP: return 2.0 * (-7.0 / 8.0);
  }
  return 0.0;
}

/// b - a for the interior configuration, a + b for the exterior one.
inline double radius_scale(const CylinderPair& pair) {
  return pair.kind == Kind::Interior ? pair.b - pair.a : pair.a + pair.b;
}

/// -pi^3 sqrt(ab) / (768 sqrt(2 S) d^{7/2}) times the boundary factor.
/// This single expression is shared with the asymptotic expansions.
inline double leading_force_amplitude(const CylinderPair& pair, Bc bc) {
  derive_params(pair);
  const double pi3 = std::numbers::pi * std::numbers::pi * std::numbers::pi;
  const double dd = -pi3 * std::sqrt(pair.a * pair.b) / (768.0 * std::sqrt(2.0 * radius_scale(pair)) *
                                                         std::pow(pair.d, 3.5));
  return bc_factor(bc) * dd;
}

namespace detail {

// -(pi^2 R / 240) int_0^pi dtheta / (sqrt(R^2 + delta^2 - 2 R delta cos theta) - r)^4,
// integrating over the cylinder of radius R with distances to the one of radius r.
inline quad::QuadResult surface_integral(double R, double r, double delta, double rel_tol) {
  quad::QuadratureSpec spec;
  spec.rel_tol = rel_tol;
  spec.max_doublings = 16;
  auto f = [&](double theta) {
    // R^2 + delta^2 - 2 R delta cos(theta), written to keep the gap accurate near theta = 0
    const double s = std::sin(0.5 * theta);
    const double dist2 = (R - delta) * (R - delta) + 4.0 * R * delta * s * s;
    const double h = std::sqrt(dist2) - r;
    const double h2 = h * h;
    return 1.0 / (h2 * h2);
  };
  auto res = quad::integrate_finite(f, 0.0, std::numbers::pi, spec);
  const double pre = -std::numbers::pi * std::numbers::pi * R / 240.0;
  return {pre * res.value, std::abs(pre) * res.err_est};
}

}  // namespace detail

/// Numerical PFA force per unit length. Interior: integral over the outer
/// cylinder B. Exterior: mean of the integrals over B and over A, which
/// makes the result exactly symmetric under a <-> b.
inline PfaResult pfa_force_integral(const CylinderPair& pair, Bc bc, double rel_tol = 1e-11) {
  const auto p = derive_params(pair);
  quad::QuadResult dd;
  if (pair.kind == Kind::Interior) {
    dd = detail::surface_integral(pair.b, pair.a, p.delta, rel_tol);
  } else {
    const auto on_b = detail::surface_integral(pair.b, pair.a, p.delta, rel_tol);
    const auto on_a = detail::surface_integral(pair.a, pair.b, p.delta, rel_tol);
    dd = {0.5 * (on_b.value + on_a.value), 0.5 * (on_b.err_est + on_a.err_est)};
  }
  const double f = bc_factor(bc);
  return {f * dd.value, Method::Integral, std::abs(f) * dd.err_est};
}

inline PfaResult pfa_force_leading(const CylinderPair& pair, Bc bc) {
  return {leading_force_amplitude(pair, bc), Method::LeadingClosedForm, 0.0};
}

}  // namespace cascyl::pfa
