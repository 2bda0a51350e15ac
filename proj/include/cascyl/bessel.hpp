#pragma once

// Exponentially scaled modified Bessel functions of integer order,
//
//   i_n(z) = exp(-z) I_n(z),   k_n(z) = exp(z) K_n(z),
//
// and their derivatives. Every routine also has a log form, because the
// round-trip matrices need orders in the thousands at arguments where the
// plain scaled values under/overflow double precision.
//
// Methods:
//   - ascending power series for small z (I_n) and z <= 2 (K_0, K_1),
//   - Steed's continued fraction for K_0, K_1 at z > 2,
//   - continued fraction + downward (Miller-type) ratio recurrence for I_n,
//     normalized by the Wronskian i_0 k_1 + i_1 k_0 = 1/z,
//   - upward ratio recurrence for K_n,
//   - uniform large-order (Debye) expansion for n >= kDebyeMinOrder.

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "cascyl/errors.hpp"

namespace cascyl::bessel {

inline constexpr int kDebyeMinOrder = 100;

namespace detail {

using Poly = std::vector<double>;  // coefficients of t^j

inline double eval_poly(const Poly& p, double t) {
  double acc = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * t + *it;
  return acc;
}

inline Poly derivative(const Poly& p) {
  Poly out(p.size() > 1 ? p.size() - 1 : 1, 0.0);
  for (std::size_t j = 1; j < p.size(); ++j) out[j - 1] = static_cast<double>(j) * p[j];
  return out;
}

inline constexpr int kDebyeTerms = 12;

struct DebyePolynomials {
  std::vector<Poly> u;  // u_0 .. u_kDebyeTerms
  std::vector<Poly> v;  // v_0 .. v_kDebyeTerms
};

// u_{k+1}(t) = t^2 (1 - t^2) u_k'(t) / 2 + (1/8) int_0^t (1 - 5 s^2) u_k(s) ds
// v_k(t)     = u_k(t) + t (t^2 - 1) (u_{k-1}(t) / 2 + t u_{k-1}'(t))
inline DebyePolynomials make_debye_polynomials() {
  DebyePolynomials out;
  out.u.push_back(Poly{1.0});
  for (int k = 0; k < kDebyeTerms; ++k) {
    const Poly& uk = out.u.back();
    Poly next(uk.size() + 3, 0.0);
    for (std::size_t j = 0; j < uk.size(); ++j) {
      const double c = uk[j];
      const double jd = static_cast<double>(j);
      next[j + 1] += 0.5 * jd * c;
      next[j + 3] -= 0.5 * jd * c;
      next[j + 1] += 0.125 * c / (jd + 1.0);
      next[j + 3] -= 0.125 * 5.0 * c / (jd + 3.0);
    }
    out.u.push_back(std::move(next));
  }
  out.v.push_back(Poly{1.0});
  for (int k = 1; k <= kDebyeTerms; ++k) {
    const Poly& prev = out.u[k - 1];
    const Poly dprev = derivative(prev);
    Poly vk = out.u[k];
    vk.resize(std::max(vk.size(), prev.size() + 4), 0.0);
    for (std::size_t j = 0; j < prev.size(); ++j) {
      vk[j + 3] += 0.5 * prev[j];
      vk[j + 1] -= 0.5 * prev[j];
    }
    for (std::size_t j = 0; j < dprev.size(); ++j) {
      vk[j + 4] += dprev[j];
      vk[j + 2] -= dprev[j];
    }
    out.v.push_back(std::move(vk));
  }
  return out;
}

inline const DebyePolynomials& debye_polynomials() {
  static const DebyePolynomials polys = make_debye_polynomials();
  return polys;
}

struct DebyeLog {
  double log_i;  // log i_nu(x)
  double log_k;  // log k_nu(x)
};

// Uniform expansion of I_nu(nu z), K_nu(nu z) with z = x / nu.
inline DebyeLog debye_log(double nu, double x) {
  const auto& polys = debye_polynomials();
  const double z = x / nu;
  const double s = std::sqrt(1.0 + z * z);
  const double t = 1.0 / s;
  // nu * eta - x with eta = s - asinh(1/z)
  const double expo = nu / (s + z) - nu * std::asinh(1.0 / z);
  double sum_i = 0.0, sum_k = 0.0, pw = 1.0;
  for (int k = 0; k <= kDebyeTerms; ++k) {
    const double term = eval_poly(polys.u[k], t) * pw;
    sum_i += term;
    sum_k += (k % 2 == 0) ? term : -term;
    pw /= nu;
  }
  const double quarter = 0.25 * std::log1p(z * z);
  DebyeLog out;
  out.log_i = expo - 0.5 * std::log(2.0 * std::numbers::pi * nu) - quarter + std::log(sum_i);
  out.log_k = -expo + 0.5 * std::log(std::numbers::pi / (2.0 * nu)) - quarter + std::log(sum_k);
  return out;
}

// log i_n(z) from the ascending series; exact up to rounding, all terms positive.
inline double series_log_i(int n, double z) {
  const double y = 0.25 * z * z;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 100000; ++k) {
    term *= y / (static_cast<double>(k) * static_cast<double>(n + k));
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return n * std::log(0.5 * z) - std::lgamma(n + 1.0) + std::log(sum) - z;
}

struct ScaledPair {
  double k0;
  double k1;
};

// k_0(z), k_1(z): ascending series (z <= 2) or Steed's continued fraction.
inline ScaledPair scaled_k01(double z) {
  constexpr double euler_gamma = 0.57721566490153286061;
  if (z <= 2.0) {
    const double y = 0.25 * z * z;
    const double lg = std::log(0.5 * z);
    // I_0, I_1 and the digamma-weighted companion series.
    double t0 = 1.0, i0 = 1.0, s0 = -euler_gamma;  // psi(1) = -gamma
    double t1 = 1.0, i1 = 1.0, s1 = -2.0 * euler_gamma + 1.0;  // psi(1) + psi(2)
    double harmonic = 0.0;
    for (int k = 1; k < 200; ++k) {
      const double kd = k;
      harmonic += 1.0 / kd;
      t0 *= y / (kd * kd);
      t1 *= y / (kd * (kd + 1.0));
      const double psi_k1 = -euler_gamma + harmonic;          // psi(k+1)
      const double psi_k2 = psi_k1 + 1.0 / (kd + 1.0);        // psi(k+2)
      i0 += t0;
      i1 += t1;
      s0 += psi_k1 * t0;
      s1 += (psi_k1 + psi_k2) * t1;
      if (t0 < 1e-18 * i0 && t1 < 1e-18 * i1) break;
    }
    const double I1 = 0.5 * z * i1;
    const double K0 = -lg * i0 + s0;
    const double K1 = 1.0 / z + lg * I1 - 0.25 * z * s1;
    const double e = std::exp(z);
    return {K0 * e, K1 * e};
  }
  double b = 2.0 * (1.0 + z);
  double d = 1.0 / b;
  double h = d, delh = d;
  double q1 = 0.0, q2 = 1.0;
  const double a1 = 0.25;
  double q = a1, c = a1, a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 1; i < 100000; ++i) {
    a -= 2 * i;
    c = -a * c / (i + 1.0);
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < 1e-17) break;
  }
  h *= a1;
  const double k0 = std::sqrt(std::numbers::pi / (2.0 * z)) / s;
  const double k1 = k0 * (z + 0.5 - h) / z;
  return {k0, k1};
}

// I_{n+1}(z) / I_n(z) by modified Lentz evaluation of the continued fraction
// 1 / (2(n+1)/z + 1 / (2(n+2)/z + ...)).
inline double i_ratio_cf(int n, double z) {
  constexpr double tiny = 1e-300;
  double f = tiny, c = f, d = 0.0;
  for (int j = 1; j < 10000000; ++j) {
    const double bj = 2.0 * (n + j) / z;
    d = bj + d;
    if (d == 0.0) d = tiny;
    c = bj + 1.0 / c;
    if (c == 0.0) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return f;
}

inline void check_argument(double z) {
  if (!std::isfinite(z) || z < 0.0) throw DomainError("Bessel argument must be finite and non-negative");
}

inline void check_positive_argument(double z) {
  if (!std::isfinite(z) || z <= 0.0) throw DomainError("Bessel argument must be finite and positive");
}

inline bool use_series(int n, double z) { return z <= 2.0 || z * z <= 4.0 * (n + 1.0); }

}  // namespace detail

/// Scaled values of orders 0..n_max at a single argument, stored as logs.
/// Built once per argument and then read by many matrix entries.
class OrderTable {
 public:
  OrderTable(double z, int n_max) : z_(z) {
    detail::check_positive_argument(z);
    if (n_max < 0) n_max = 0;
    const int top = n_max + 1;  // one extra order for derivatives
    const auto k01 = detail::scaled_k01(z);

    k_ratio_.resize(top);
    log_k_.resize(top + 1);
    log_k_[0] = std::log(k01.k0);
    k_ratio_[0] = k01.k1 / k01.k0;
    for (int n = 1; n < top; ++n) k_ratio_[n] = 1.0 / k_ratio_[n - 1] + 2.0 * n / z;
    for (int n = 0; n < top; ++n) log_k_[n + 1] = log_k_[n] + std::log(k_ratio_[n]);

    i_ratio_.resize(top);
    i_ratio_[top - 1] = detail::i_ratio_cf(top - 1, z);
    for (int n = top - 1; n >= 1; --n) i_ratio_[n - 1] = 1.0 / (2.0 * n / z + i_ratio_[n]);

    log_i_.resize(top + 1);
    if (detail::use_series(0, z)) {
      log_i_[0] = detail::series_log_i(0, z);
    } else {
      log_i_[0] = -std::log(z * (k01.k1 + i_ratio_[0] * k01.k0));
    }
    for (int n = 0; n < top; ++n) log_i_[n + 1] = log_i_[n] + std::log(i_ratio_[n]);
  }

  double argument() const { return z_; }
  int max_order() const { return static_cast<int>(log_i_.size()) - 2; }

  double log_i(int n) const { return log_i_[idx(n)]; }
  double log_k(int n) const { return log_k_[idx(n)]; }

  /// log(exp(-z) I'_n(z)); I'_n > 0 for z > 0.
  double log_i_prime(int n) const {
    const int m = idx(n);
    if (m == 0) return log_i_[1];
    return log_i_[m] + std::log(0.5 * (1.0 / i_ratio_[m - 1] + i_ratio_[m]));
  }

  /// log|exp(z) K'_n(z)|; K'_n < 0.
  double log_k_prime_abs(int n) const {
    const int m = idx(n);
    if (m == 0) return log_k_[1];
    return log_k_[m] + std::log(0.5 * (1.0 / k_ratio_[m - 1] + k_ratio_[m]));
  }

 private:
  static int idx(int n) { return n < 0 ? -n : n; }

  double z_;
  std::vector<double> log_i_, log_k_;
  std::vector<double> i_ratio_, k_ratio_;  // I_{n+1}/I_n and K_{n+1}/K_n
};

/// log(exp(-z) I_|n|(z)); -inf for z == 0 and n != 0.
inline double log_bessel_i_scaled(int n, double z) {
  detail::check_argument(z);
  n = n < 0 ? -n : n;
  if (z == 0.0) return n == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  if (n >= kDebyeMinOrder) return detail::debye_log(n, z).log_i;
  if (detail::use_series(n, z)) return detail::series_log_i(n, z);
  // Downward ratio recurrence from the continued fraction at order n.
  double rho = detail::i_ratio_cf(n, z);
  double log_ratio = 0.0;  // log(I_n / I_0)
  for (int k = n; k >= 1; --k) {
    rho = 1.0 / (2.0 * k / z + rho);  // I_k / I_{k-1}
    log_ratio += std::log(rho);
  }
  // rho is now I_1/I_0.
  const auto k01 = detail::scaled_k01(z);
  const double log_i0 = -std::log(z * (k01.k1 + rho * k01.k0));
  return log_i0 + log_ratio;
}

/// log(exp(z) K_|n|(z)).
inline double log_bessel_k_scaled(int n, double z) {
  detail::check_positive_argument(z);
  n = n < 0 ? -n : n;
  if (n >= kDebyeMinOrder) return detail::debye_log(n, z).log_k;
  const auto k01 = detail::scaled_k01(z);
  if (n == 0) return std::log(k01.k0);
  double ratio = k01.k1 / k01.k0;
  double acc = std::log(k01.k0) + std::log(ratio);
  for (int k = 1; k < n; ++k) {
    ratio = 1.0 / ratio + 2.0 * k / z;
    acc += std::log(ratio);
  }
  return acc;
}

inline double bessel_i_scaled(int n, double z) { return std::exp(log_bessel_i_scaled(n, z)); }
inline double bessel_k_scaled(int n, double z) { return std::exp(log_bessel_k_scaled(n, z)); }

/// log(exp(-z) I'_|n|(z)) via I'_n = (I_{n-1} + I_{n+1}) / 2.
inline double log_bessel_i_prime_scaled(int n, double z) {
  detail::check_argument(z);
  n = n < 0 ? -n : n;
  if (z == 0.0) return n == 1 ? std::log(0.5) : -std::numeric_limits<double>::infinity();
  const double lo = log_bessel_i_scaled(n - 1, z);
  const double hi = log_bessel_i_scaled(n + 1, z);
  return lo + std::log(0.5 * (1.0 + std::exp(hi - lo)));
}

/// log|exp(z) K'_|n|(z)| via K'_n = -(K_{n-1} + K_{n+1}) / 2.
inline double log_bessel_k_prime_scaled_abs(int n, double z) {
  detail::check_positive_argument(z);
  n = n < 0 ? -n : n;
  const double lo = log_bessel_k_scaled(n - 1, z);
  const double hi = log_bessel_k_scaled(n + 1, z);
  return hi + std::log(0.5 * (1.0 + std::exp(lo - hi)));
}

inline double bessel_i_prime_scaled(int n, double z) { return std::exp(log_bessel_i_prime_scaled(n, z)); }

/// exp(z) K'_n(z), always negative.
inline double bessel_k_prime_scaled(int n, double z) {
  return -std::exp(log_bessel_k_prime_scaled_abs(n, z));
}

}  // namespace cascyl::bessel
