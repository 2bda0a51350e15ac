#pragma once

// One-dimensional quadrature used throughout: composite Gauss-Legendre with
// panel doubling, a logarithmic map for exponentially decaying integrands on
// [0, inf), and Gauss-Hermite rules for Gaussian weights.

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "cascyl/errors.hpp"

namespace cascyl::quad {

struct QuadratureSpec {
  double rel_tol = 1e-8;
  int max_doublings = 12;
  int base_nodes = 32;
  double decay_rate = 1.0;  // integrand ~ exp(-decay_rate * x) at large x
};

struct QuadResult {
  double value = 0.0;
  double err_est = 0.0;
};

/// Nodes and weights of a rule: sum_i w[i] f(x[i]) approximates an integral.
struct Rule {
  std::vector<double> x;
  std::vector<double> w;

  template <class F>
  double apply(F&& f) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += w[i] * f(x[i]);
    return acc;
  }
};

/// n-point Gauss-Legendre rule on [-1, 1] (Newton iteration on P_n).
inline Rule gauss_legendre(int n) {
  if (n < 1) throw DomainError("Gauss-Legendre needs at least one node");
  Rule r;
  r.x.resize(n);
  r.w.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-16) break;
    }
    // recompute the derivative at the converged node
    double p1 = 1.0, p2 = 0.0;
    for (int j = 1; j <= n; ++j) {
      const double p3 = p2;
      p2 = p1;
      p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
    }
    pp = n * (z * p1 - p2) / (z * z - 1.0);
    r.x[i] = -z;
    r.x[n - 1 - i] = z;
    r.w[i] = r.w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
  return r;
}

/// Composite rule on [lo, hi] after the map x = lo + (hi - lo) s^2, s in [0, 1],
/// which removes an integrable (x - lo)^(-1/2) endpoint singularity.
inline Rule finite_rule(double lo, double hi, int panels, const Rule& base) {
  Rule r;
  const double width = hi - lo;
  const double h = 1.0 / panels;
  r.x.reserve(static_cast<std::size_t>(panels) * base.x.size());
  r.w.reserve(r.x.capacity());
  for (int p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * h;
    for (std::size_t i = 0; i < base.x.size(); ++i) {
      const double s = mid + 0.5 * h * base.x[i];
      r.x.push_back(lo + width * s * s);
      r.w.push_back(0.5 * h * base.w[i] * 2.0 * width * s);
    }
  }
  return r;
}

/// Rule for int_0^inf after x = -ln(u) / rate followed by the finite map on
/// u in (0, 1]. Nodes come out in decreasing x.
inline Rule semi_infinite_rule(double rate, int panels, const Rule& base) {
  if (!(rate > 0.0)) throw DomainError("decay rate must be positive");
  const Rule ur = finite_rule(0.0, 1.0, panels, base);
  Rule r;
  r.x.resize(ur.x.size());
  r.w.resize(ur.x.size());
  for (std::size_t i = 0; i < ur.x.size(); ++i) {
    const double u = ur.x[i];
    r.x[i] = -std::log(u) / rate;
    r.w[i] = ur.w[i] / (rate * u);
  }
  return r;
}

namespace detail {

inline void check_spec(const QuadratureSpec& spec) {
  if (!(spec.rel_tol > 0.0)) throw DomainError("rel_tol must be positive");
  if (spec.base_nodes < 2) throw DomainError("base_nodes must be at least 2");
  if (spec.max_doublings < 1) throw DomainError("max_doublings must be at least 1");
}

template <class MakeRule, class F>
QuadResult doubling_loop(MakeRule&& make_rule, F&& f, const QuadratureSpec& spec, const char* what) {
  const Rule base = gauss_legendre(spec.base_nodes);
  double prev = make_rule(1, base).apply(f);
  double err = 0.0;
  for (int k = 1, panels = 2; k <= spec.max_doublings; ++k, panels *= 2) {
    const double cur = make_rule(panels, base).apply(f);
    err = std::abs(cur - prev);
    if (!std::isfinite(cur)) throw NoConvergence(std::string(what) + ": integrand produced a non-finite value");
    if (err <= spec.rel_tol * std::abs(cur) + 1e-300) return {cur, err};
    prev = cur;
  }
  throw NoConvergence(std::string(what) + ": no convergence after " + std::to_string(spec.max_doublings) +
                      " doublings (last difference " + std::to_string(err) + ")");
}

}  // namespace detail

/// int_lo^hi f(x) dx. f may have an (x - lo)^(-1/2) singularity at lo.
inline QuadResult integrate_finite(const std::function<double(double)>& f, double lo, double hi,
                                   const QuadratureSpec& spec = {}) {
  detail::check_spec(spec);
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) throw DomainError("integrate_finite needs lo < hi");
  return detail::doubling_loop([&](int panels, const Rule& base) { return finite_rule(lo, hi, panels, base); }, f,
                               spec, "integrate_finite");
}

/// int_0^inf f(x) dx for f decaying like exp(-spec.decay_rate * x).
inline QuadResult integrate_semi_infinite(const std::function<double(double)>& f, const QuadratureSpec& spec = {}) {
  detail::check_spec(spec);
  return detail::doubling_loop(
      [&](int panels, const Rule& base) { return semi_infinite_rule(spec.decay_rate, panels, base); }, f, spec,
      "integrate_semi_infinite");
}

/// Physicists' Gauss-Hermite rule: sum w_i g(x_i) ~ int g(x) exp(-x^2) dx.
inline Rule gauss_hermite_rule(int n) {
  if (n < 1) throw DomainError("Gauss-Hermite needs at least one node");
  constexpr double pim4 = 0.7511255444649425;  // pi^(-1/4)
  Rule r;
  r.x.assign(n, 0.0);
  r.w.assign(n, 0.0);
  const int half = (n + 1) / 2;
  double z = 0.0;
  for (int i = 0; i < half; ++i) {
    if (i == 0)
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -0.16667);
    else if (i == 1)
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    else if (i == 2)
      z = 1.86 * z - 0.86 * r.x[0];
    else if (i == 3)
      z = 1.91 * z - 0.91 * r.x[1];
    else
      z = 2.0 * z - r.x[i - 2];
    double pp = 0.0;
    for (int it = 0; it < 200; ++it) {
      double p1 = pim4, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15 * std::max(1.0, std::abs(z))) {
        // one more pass for the weight at the final node
        p1 = pim4;
        p2 = 0.0;
        for (int j = 0; j < n; ++j) {
          const double p3 = p2;
          p2 = p1;
          p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
        }
        pp = std::sqrt(2.0 * n) * p2;
        break;
      }
    }
    r.x[i] = z;
    r.x[n - 1 - i] = -z;
    r.w[i] = r.w[n - 1 - i] = 2.0 / (pp * pp);
  }
  if (n % 2 == 1) r.x[half - 1] = 0.0;
  return r;
}

/// int f(q) exp(-lambda (q - center)^2) dq, exact for polynomial f of degree
/// up to 2 n_nodes - 1.
inline double gauss_hermite(const std::function<double(double)>& f, double lambda, int n_nodes,
                            double center = 0.0) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("gauss_hermite needs lambda > 0");
  const Rule r = gauss_hermite_rule(n_nodes);
  const double scale = 1.0 / std::sqrt(lambda);
  double acc = 0.0;
  for (int i = 0; i < n_nodes; ++i) acc += r.w[i] * f(center + scale * r.x[i]);
  return acc * scale;
}

}  // namespace cascyl::quad
