#pragma once

// Small-separation expansions  X ~ X0 (1 + theta1 d + ...)  of the energy
// and force per unit length, for all boundary pairs and both geometries.
// Brackets are stored as exact rational (+ rational / pi^2) coefficients of
// the four length scales 1/S, S/(ab), 1/a, 1/b with S = b - a (interior) or
// a + b (exterior).

#include <cmath>
#include <cstdlib>
#include <numeric>
#include <numbers>

#include "cascyl/errors.hpp"
#include "cascyl/geometry.hpp"
#include "cascyl/pfa.hpp"

namespace cascyl::asym {

struct Rational {
  long long num = 0;
  long long den = 1;

  constexpr Rational() = default;
  constexpr Rational(long long n, long long d = 1) : num(n), den(d) { normalize(); }

  constexpr void normalize() {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }
  constexpr double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend constexpr Rational operator+(Rational x, Rational y) {
    return Rational(x.num * y.den + y.num * x.den, x.den * y.den);
  }
  friend constexpr Rational operator*(Rational x, Rational y) { return Rational(x.num * y.num, x.den * y.den); }
  friend constexpr Rational operator-(Rational x) { return Rational(-x.num, x.den); }
  friend constexpr bool operator==(Rational x, Rational y) { return x.num == y.num && x.den == y.den; }
};

/// rational + over_pi2 / pi^2
struct Coef {
  Rational rational;
  Rational over_pi2;

  double value() const {
    return rational.value() + over_pi2.value() / (std::numbers::pi * std::numbers::pi);
  }
  friend Coef operator+(const Coef& x, const Coef& y) {
    return {x.rational + y.rational, x.over_pi2 + y.over_pi2};
  }
  friend Coef operator*(Rational s, const Coef& x) { return {s * x.rational, s * x.over_pi2}; }
  friend bool operator==(const Coef& x, const Coef& y) = default;
};

struct BracketForm {
  Coef inv_s;      // multiplies 1/S
  Coef s_over_ab;  // multiplies S/(ab)
  Coef inv_a;      // multiplies 1/a
  Coef inv_b;      // multiplies 1/b

  double evaluate(double a, double b, double s) const {
    return inv_s.value() / s + s_over_ab.value() * s / (a * b) + inv_a.value() / a + inv_b.value() / b;
  }
  friend BracketForm operator+(const BracketForm& x, const BracketForm& y) {
    return {x.inv_s + y.inv_s, x.s_over_ab + y.s_over_ab, x.inv_a + y.inv_a, x.inv_b + y.inv_b};
  }
  friend BracketForm operator*(Rational s, const BracketForm& x) {
    return {s * x.inv_s, s * x.s_over_ab, s * x.inv_a, s * x.inv_b};
  }
  friend bool operator==(const BracketForm& x, const BracketForm& y) = default;
};

enum class Quantity { Energy, Force };

struct ExpansionResult {
  double amplitude = 0.0;  // X0 per unit length at the given d
  double bracket = 0.0;    // theta1, units 1/length
  Quantity kind = Quantity::Energy;
  Bc bc = Bc::DD;
  Kind geometry_kind = Kind::Interior;
  BracketForm form{};

  /// amplitude * (1 + bracket * d)
  double value(double d) const { return amplitude * (1.0 + bracket * d); }
};

enum class PfaBias { Underestimates, Overestimates, Boundary };

namespace detail {

// Coefficients that differ between energy and force.
struct Table {
  Rational inv_s;      // 7/12 or 7/20
  Rational s_over_ab;  // 7/36 or 7/60
  Rational nn_pi2;     // -40/3 or -8
  Rational mixed_pi2;  // 160/21 or 32/7
};

constexpr Table table(Quantity q) {
  return q == Quantity::Energy ? Table{Rational(7, 12), Rational(7, 36), Rational(-40, 3), Rational(160, 21)}
                               : Table{Rational(7, 20), Rational(7, 60), Rational(-8), Rational(32, 7)};
}

inline BracketForm scalar_form(Quantity q, Kind kind, Bc bc) {
  const Table t = table(q);
  const Rational sign = kind == Kind::Interior ? Rational(1) : Rational(-1);
  BracketForm f;
  f.inv_s = {sign * t.inv_s, {}};
  f.s_over_ab = {t.s_over_ab, {}};
  switch (bc) {
    case Bc::NN: f.s_over_ab.over_pi2 = t.nn_pi2; break;
    case Bc::DN: f.inv_b = {{}, sign * t.mixed_pi2}; break;
    case Bc::ND: f.inv_a = {{}, -t.mixed_pi2}; break;
    default: break;
  }
  return f;
}

inline void composite_parts(Bc bc, Bc& first, Bc& second) {
  first = bc == Bc::PCPC ? Bc::DD : Bc::DN;
  second = bc == Bc::PCPC ? Bc::NN : Bc::ND;
}

}  // namespace detail

/// Symbolic bracket. Composites take the mean of their two parts, which is
/// the amplitude-weighted combination since the parts share one amplitude.
inline BracketForm bracket_form(Quantity q, Kind kind, Bc bc) {
  if (!is_composite(bc)) return detail::scalar_form(q, kind, bc);
  Bc x, y;
  detail::composite_parts(bc, x, y);
  return Rational(1, 2) * (detail::scalar_form(q, kind, x) + detail::scalar_form(q, kind, y));
}

inline double energy_amplitude(const CylinderPair& pair, Bc bc) {
  derive_params(pair);
  const double pi3 = std::numbers::pi * std::numbers::pi * std::numbers::pi;
  const double dd = -pi3 * std::sqrt(pair.a * pair.b) /
                    (1920.0 * std::sqrt(2.0 * pfa::radius_scale(pair)) * std::pow(pair.d, 2.5));
  return pfa::bc_factor(bc) * dd;
}

inline ExpansionResult energy_expansion(const CylinderPair& pair, Bc bc) {
  ExpansionResult r;
  r.amplitude = energy_amplitude(pair, bc);
  r.form = bracket_form(Quantity::Energy, pair.kind, bc);
  r.bracket = r.form.evaluate(pair.a, pair.b, pfa::radius_scale(pair));
  r.kind = Quantity::Energy;
  r.bc = bc;
  r.geometry_kind = pair.kind;
  return r;
}

inline ExpansionResult force_expansion(const CylinderPair& pair, Bc bc) {
  ExpansionResult r;
  r.amplitude = pfa::leading_force_amplitude(pair, bc);
  r.form = bracket_form(Quantity::Force, pair.kind, bc);
  r.bracket = r.form.evaluate(pair.a, pair.b, pfa::radius_scale(pair));
  r.kind = Quantity::Force;
  r.bc = bc;
  r.geometry_kind = pair.kind;
  return r;
}

/// Force bracket of a cylinder of radius a in front of a plate, as a
/// multiple of 1/a.
inline Coef cylinder_plate_coef(Bc bc) {
  switch (bc) {
    case Bc::DD:
    case Bc::DN: return {Rational(7, 60), {}};
    case Bc::NN: return {Rational(7, 60), Rational(-8)};
    case Bc::ND: return {Rational(7, 60), Rational(-32, 7)};
    case Bc::PCPC:
    case Bc::PCIP: {
      Bc x, y;
      detail::composite_parts(bc, x, y);
      return Rational(1, 2) * (cylinder_plate_coef(x) + cylinder_plate_coef(y));
    }
  }
  return {};
}

/// Cylinder-plate force expansion at gap d (the b -> infinity limit).
inline ExpansionResult cylinder_plate_limit(double a, double d, Bc bc) {
  if (!(a > 0.0) || !std::isfinite(a)) throw InvalidGeometry("radius a must be positive and finite");
  if (!(d > 0.0) || !std::isfinite(d)) throw InvalidGeometry("gap d must be positive and finite");
  const double pi3 = std::numbers::pi * std::numbers::pi * std::numbers::pi;
  ExpansionResult r;
  r.amplitude = pfa::bc_factor(bc) * (-pi3 * std::sqrt(a) / (768.0 * std::sqrt(2.0) * std::pow(d, 3.5)));
  r.form.inv_a = cylinder_plate_coef(bc);
  r.bracket = r.form.inv_a.value() / a;
  r.kind = Quantity::Force;
  r.bc = bc;
  r.geometry_kind = Kind::Exterior;
  return r;
}

/// Sign of the force bracket: positive means the exact force is stronger
/// than its PFA estimate.
inline PfaBias classify_pfa_bias(const CylinderPair& pair, Bc bc) {
  const double br = force_expansion(pair, bc).bracket;
  if (std::abs(br) * pair.d < 1e-14) return PfaBias::Boundary;
  return br > 0.0 ? PfaBias::Underestimates : PfaBias::Overestimates;
}

/// Largest relative deviation of the two-cylinder force brackets (both
/// geometries) at b = b_large from the cylinder-plate bracket.
inline double limit_consistency_check(double a, double b_large, Bc bc) {
  if (!(b_large >= 1e3 * a)) throw DomainError("limit check needs b_large >= 1e3 * a");
  const double ref = cylinder_plate_coef(bc).value() / a;
  double worst = 0.0;
  for (Kind k : {Kind::Interior, Kind::Exterior}) {
    const CylinderPair p{k, a, b_large, 1e-3 * a};
    const double br = force_expansion(p, bc).bracket;
    worst = std::max(worst, std::abs(br - ref) / std::abs(ref));
  }
  return worst;
}

inline const char* to_string(PfaBias b) {
  switch (b) {
    case PfaBias::Underestimates: return "underestimates";
    case PfaBias::Overestimates: return "overestimates";
    case PfaBias::Boundary: return "boundary";
  }
  return "?";
}

}  // namespace cascyl::asym
