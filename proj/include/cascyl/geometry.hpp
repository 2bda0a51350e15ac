#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "cascyl/errors.hpp"

namespace cascyl {

/// Whether cylinder A (radius a) sits inside cylinder B or beside it.
enum class Kind { Interior, Exterior };

/// Boundary conditions, first letter on cylinder A (radius a), second on B.
/// PCPC and PCIP are the electromagnetic composites DD+NN and DN+ND.
enum class Bc { DD, NN, DN, ND, PCPC, PCIP };

inline constexpr Bc kScalarBcs[] = {Bc::DD, Bc::NN, Bc::DN, Bc::ND};
inline constexpr Bc kAllBcs[] = {Bc::DD, Bc::NN, Bc::DN, Bc::ND, Bc::PCPC, Bc::PCIP};

constexpr bool is_composite(Bc bc) { return bc == Bc::PCPC || bc == Bc::PCIP; }

/// 0 for like conditions (attractive), 1 for mixed conditions (repulsive).
constexpr int parity(Bc bc) {
  return (bc == Bc::DN || bc == Bc::ND || bc == Bc::PCIP) ? 1 : 0;
}

/// Neumann condition on cylinder A / on cylinder B.
constexpr bool neumann_on_a(Bc bc) { return bc == Bc::NN || bc == Bc::ND; }
constexpr bool neumann_on_b(Bc bc) { return bc == Bc::NN || bc == Bc::DN; }

inline std::string_view to_string(Bc bc) {
  switch (bc) {
    case Bc::DD: return "dd";
    case Bc::NN: return "nn";
    case Bc::DN: return "dn";
    case Bc::ND: return "nd";
    case Bc::PCPC: return "pcpc";
    case Bc::PCIP: return "pcip";
  }
  return "?";
}

inline std::string_view to_string(Kind k) {
  return k == Kind::Interior ? "interior" : "exterior";
}

inline std::optional<Bc> parse_bc(std::string_view s) {
  for (Bc bc : kAllBcs)
    if (to_string(bc) == s) return bc;
  return std::nullopt;
}

inline std::optional<Kind> parse_kind(std::string_view s) {
  if (s == "interior") return Kind::Interior;
  if (s == "exterior") return Kind::Exterior;
  return std::nullopt;
}

/// Two parallel cylinders. `d` is the closest surface-to-surface gap; the
/// length only scales results, which are all reported per unit length.
struct CylinderPair {
  Kind kind = Kind::Interior;
  double a = 1.0;
  double b = 2.0;
  double d = 0.1;
  double length = 1.0;

  CylinderPair with_gap(double gap) const {
    CylinderPair p = *this;
    p.d = gap;
    return p;
  }
  CylinderPair swapped() const {
    CylinderPair p = *this;
    p.a = b;
    p.b = a;
    return p;
  }
};

/// Dimensionless parameters. For the exterior configuration alpha and beta
/// are a/(a+b) and b/(a+b); in both cases alpha/eps == a/d.
struct DerivedParams {
  double delta;
  double alpha;
  double beta;
  double eps;
};

namespace detail {

// b - a - d, nudged by a few ulps when needed so that (delta + a) + d == b
// holds in floating point as well.
inline double closing_difference(double b, double a, double d) {
  const double delta = b - a - d;
  if ((delta + a) + d == b) return delta;
  double up = delta, down = delta;
  for (int i = 0; i < 8; ++i) {
    up = std::nextafter(up, INFINITY);
    if ((up + a) + d == b) return up;
    down = std::nextafter(down, 0.0);
    if (down > 0.0 && (down + a) + d == b) return down;
  }
  return delta;
}

}  // namespace detail

inline DerivedParams derive_params(const CylinderPair& p) {
  auto finite_pos = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!finite_pos(p.a)) throw InvalidGeometry("radius a must be positive and finite");
  if (!finite_pos(p.b)) throw InvalidGeometry("radius b must be positive and finite");
  if (!finite_pos(p.d)) throw InvalidGeometry("gap d must be positive and finite");
  if (!finite_pos(p.length)) throw InvalidGeometry("length must be positive and finite");

  DerivedParams out{};
  if (p.kind == Kind::Interior) {
    if (!(p.a + p.d < p.b))
      throw InvalidGeometry("interior configuration needs a + d < b (center distance b - a - d > 0)");
    const double width = p.b - p.a;
    out.delta = detail::closing_difference(p.b, p.a, p.d);
    out.alpha = p.a / width;
    out.beta = out.alpha + 1.0;
    out.eps = p.d / width;
  } else {
    const double sum = p.a + p.b;
    out.delta = p.a + p.b + p.d;
    out.alpha = p.a / sum;
    out.beta = p.b / sum;
    out.eps = p.d / sum;
  }
  return out;
}

}  // namespace cascyl
