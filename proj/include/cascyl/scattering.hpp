#pragma once

// Exact Casimir interaction between two parallel cylinders from the
// functional determinant
//
//   E / L = (1 / 4 pi) int_0^inf xi ln det(1 - M(xi)) dxi.
//
// All Bessel factors enter through exponentially scaled values; the
// unscaled exponentials of a round trip combine to exactly exp(-2 d xi).
//
// The round-trip matrix is never formed in its raw, non-symmetric shape.
// With ra_n = I_n/K_n(a xi) (primed for N on a), rb_p the ratio on b, and
// T the translation factor,
//
//   M_mn = (ra_n / ra_m)^{1/2} sigma (W^T W)_mn,
//   W_pn = |rb_p|^{1/2} T_pn |ra_n|^{1/2} exp(-d xi),
//
// so M is similar to the symmetric sigma W^T W (sigma = -1 for mixed
// conditions). Since every index n and -n carry the same ratios, W^T W also
// splits into blocks even and odd under n -> -n.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <deque>
#include <exception>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "cascyl/bessel.hpp"
#include "cascyl/errors.hpp"
#include "cascyl/geometry.hpp"
#include "cascyl/quadrature.hpp"

namespace cascyl::scatter {

struct RoundTripMatrix {
  int half_width = 0;              // indices -N..N
  Eigen::MatrixXd entries;         // scaled, similarity-balanced round trip
  double prefactor_log = 0.0;      // -2 d xi
};

struct EnergyResult {
  double value_per_length = 0.0;
  double err_est = 0.0;
  int n_matrix = 0;
  int p_terms_max = 0;
  int xi_nodes = 0;
  bool converged = false;
};

/// NoConvergence from the energy loop, carrying the last estimate with
/// converged = false. Without any truncation comparison err_est is |E|.
class EnergyNoConvergence : public NoConvergence {
 public:
  EnergyNoConvergence(const std::string& what, const EnergyResult& last) : NoConvergence(what), partial(last) {}
  EnergyResult partial;
};


struct ScatteringOptions {
  int n_cap = 4096;            // largest half width N
  int threads = 1;             // xi nodes evaluated concurrently
  int base_nodes = 12;         // Gauss-Legendre nodes per xi panel
  int max_xi_doublings = 8;
  double p_tol = 1e-15;        // relative size of a negligible p row or term
  double p_cap_factor = 10.0;  // p window cap = factor * (delta xi + |m| + |n| + 50)
};

namespace detail {

inline void require_scalar(Bc bc) {
  if (is_composite(bc)) throw DomainError("exact scattering takes DD, NN, DN or ND only");
}

// Log magnitudes and signs of the three Bessel factors at one xi.
class Factors {
 public:
  Factors(const CylinderPair& pair, Bc bc, double xi, int n_max, int p_guess)
      : pair_(pair), bc_(bc), xi_(xi), delta_(derive_params(pair).delta), ta_(pair.a * xi, n_max) {
    if (!(xi > 0.0) || !std::isfinite(xi)) throw DomainError("xi must be positive and finite");
    reserve(p_guess);
  }

  double delta() const { return delta_; }

  /// Grow the b and translation tables to cover |p| <= p_max.
  void reserve(int p_max) {
    if (tb_ && tb_->max_order() >= p_max) return;
    const int top = std::max(p_max, tb_ ? 2 * tb_->max_order() : 0);
    tb_.emplace(pair_.b * xi_, top);
    const int tt_top = top + ta_.max_order() + 1;
    tt_.emplace(delta_ * xi_, tt_top);
    // log_t by signed order, so rows can index it without branches
    t_offset_ = tt_top;
    t_signed_.resize(2 * static_cast<std::size_t>(tt_top) + 1);
    for (int j = -tt_top; j <= tt_top; ++j)
      t_signed_[j + tt_top] = pair_.kind == Kind::Interior ? tt_->log_i(j) : tt_->log_k(j);
  }
  /// Translation logs by signed order j = p - n (interior) or p + n (exterior).
  const double* t_signed() const { return t_signed_.data() + t_offset_; }
  int p_capacity() const { return tb_->max_order(); }

  /// log |ra_n|
  double log_ra(int n) const {
    return neumann_on_a(bc_) ? ta_.log_i_prime(n) - ta_.log_k_prime_abs(n) : ta_.log_i(n) - ta_.log_k(n);
  }
  double log_k_a(int m) const { return neumann_on_a(bc_) ? ta_.log_k_prime_abs(m) : ta_.log_k(m); }
  double log_i_a(int n) const { return neumann_on_a(bc_) ? ta_.log_i_prime(n) : ta_.log_i(n); }

  /// log |rb_p|: K/I on b inside, I/K on b outside (primed for N on b).
  double log_rb(int p) const {
    const bool nb = neumann_on_b(bc_);
    const double li = nb ? tb_->log_i_prime(p) : tb_->log_i(p);
    const double lk = nb ? tb_->log_k_prime_abs(p) : tb_->log_k(p);
    return pair_.kind == Kind::Interior ? lk - li : li - lk;
  }

  /// log of the translation factor I_{p-n}(delta xi) or K_{p+n}(delta xi), scaled.
  double log_t(int p, int n) const {
    return pair_.kind == Kind::Interior ? tt_->log_i(p - n) : tt_->log_k(p + n);
  }

  /// Overall sign of a round trip: K' < 0 flips each Neumann letter.
  double sigma() const { return (neumann_on_a(bc_) != neumann_on_b(bc_)) ? -1.0 : 1.0; }

 private:
  CylinderPair pair_;
  Bc bc_;
  double xi_;
  double delta_;
  bessel::OrderTable ta_;
  std::optional<bessel::OrderTable> tb_, tt_;
  std::vector<double> t_signed_;
  int t_offset_ = 0;
};

inline double p_cap(const ScatteringOptions& o, double delta_xi, int m, int n) {
  return o.p_cap_factor * (delta_xi + std::abs(m) + std::abs(n) + 50.0);
}

// Center of the p window: the saddle sits near p = (b/a) m.
inline int p_center(const CylinderPair& pair, int m) {
  return static_cast<int>(std::lround(pair.b / pair.a * m));
}

}  // namespace detail

/// Scaled element M_mn(xi) exp(2 d xi), summed directly over p.
inline double matrix_element(const CylinderPair& pair, Bc bc, int m, int n, double xi, double tol = 1e-15,
                             const ScatteringOptions& opts = {}) {
  detail::require_scalar(bc);
  if (!(tol > 0.0)) throw DomainError("tol must be positive");
  const int center = detail::p_center(pair, pair.kind == Kind::Interior ? m : -m);
  const int mn = std::max(std::abs(m), std::abs(n));
  detail::Factors f(pair, bc, xi, mn, std::abs(center) + 64);
  const double cap = detail::p_cap(opts, f.delta() * xi, m, n);

  auto log_term = [&](int p) {
    f.reserve(std::abs(p) + 1);
    return f.log_rb(p) + f.log_t(p, m) + f.log_t(p, n);
  };
  // Running log of the partial sum; all terms share one sign.
  auto log_add = [](double x, double y) {
    const double hi = std::max(x, y);
    return hi + std::log1p(std::exp(std::min(x, y) - hi));
  };
  const double log_tol = std::log(tol);
  double log_sum = log_term(center);
  int run_hi = 0, run_lo = 0, hi = center, lo = center;
  while (run_hi < 10 || run_lo < 10) {
    if (run_hi < 10) {
      const double lt = log_term(++hi);
      run_hi = (lt < log_tol + log_sum) ? run_hi + 1 : 0;
      log_sum = log_add(log_sum, lt);
    }
    if (run_lo < 10) {
      const double lt = log_term(--lo);
      run_lo = (lt < log_tol + log_sum) ? run_lo + 1 : 0;
      log_sum = log_add(log_sum, lt);
    }
    if (hi - center > cap || center - lo > cap)
      throw PSumNoConvergence("p sum did not settle within the window cap at m=" + std::to_string(m) +
                              ", n=" + std::to_string(n));
  }
  // Each Neumann letter carries one K' < 0.
  const double sign_a = neumann_on_a(bc) ? -1.0 : 1.0;
  const double sign_b = neumann_on_b(bc) ? -1.0 : 1.0;
  return sign_a * sign_b * std::exp(f.log_i_a(n) - f.log_k_a(m) + log_sum);
}

namespace detail {

struct BalancedFactor {
  Eigen::MatrixXd w;  // rows p (ascending), columns n = -N..N; exp(-d xi) not applied
  double sigma = 1.0;
  int p_terms = 0;
};

// Rows of W over an adaptive p window: a central block covering the saddles
// of all columns, then outward until 10 consecutive rows are negligible
// against the accumulated column norms.
inline BalancedFactor balanced_factor(const CylinderPair& pair, Bc bc, double xi, int N,
                                      const ScatteringOptions& opts) {
  require_scalar(bc);
  if (N < 0) throw DomainError("matrix half width must be non-negative");
  const int width = 2 * N + 1;
  const int pc = static_cast<int>(std::ceil(std::max(1.0, pair.b / pair.a) * N)) + 4;
  Factors f(pair, bc, xi, N, pc + 64);
  const double cap = p_cap(opts, f.delta() * xi, N, N);

  // Entries with W^2 exp(-2 d xi) < e^-120 cannot affect any determinant.
  const double cut = pair.d * xi - 60.0;
  std::vector<double> half_ra(width);
  for (int n = -N; n <= N; ++n) half_ra[n + N] = 0.5 * f.log_ra(n);

  const int step = pair.kind == Kind::Interior ? -1 : 1;  // sign of n in the translation order
  std::vector<double> colsq(width, 0.0);
  std::vector<double> up, down;  // rows p >= -pc ascending; rows p < -pc descending
  std::vector<double> row(width);

  // Fills row for index p; returns true when the row is negligible against
  // the column norms accumulated before it.
  auto make_row = [&](int p, std::vector<double>& dest) {
    f.reserve(std::abs(p) + 1);
    const double half_rb = 0.5 * f.log_rb(p);
    const double* t = f.t_signed() + p - step * N;
    bool small = true;
    for (int k = 0; k < width; ++k) {
      const double v = half_rb + t[step * k] + half_ra[k];
      const double w = v < cut ? 0.0 : std::exp(v);
      row[k] = w;
      if (w * w > opts.p_tol * colsq[k]) small = false;
    }
    for (int k = 0; k < width; ++k) colsq[k] += row[k] * row[k];
    dest.insert(dest.end(), row.begin(), row.end());
    return small;
  };

  for (int p = -pc; p <= pc; ++p) make_row(p, up);
  int run_hi = 0, run_lo = 0, hi = pc, lo = -pc;
  while (run_hi < 10 || run_lo < 10) {
    if (run_hi < 10) run_hi = make_row(++hi, up) ? run_hi + 1 : 0;
    if (run_lo < 10) run_lo = make_row(--lo, down) ? run_lo + 1 : 0;
    if (hi > cap || -lo > cap)
      throw PSumNoConvergence("p window exceeded its cap at xi=" + std::to_string(xi) + ", N=" +
                              std::to_string(N));
  }
  BalancedFactor out;
  out.sigma = f.sigma();
  const int n_down = static_cast<int>(down.size()) / width, n_up = static_cast<int>(up.size()) / width;
  out.p_terms = n_down + n_up;
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  out.w.resize(out.p_terms, width);
  out.w.bottomRows(n_up) = Eigen::Map<const RowMajor>(up.data(), n_up, width);
  out.w.topRows(n_down) = Eigen::Map<const RowMajor>(down.data(), n_down, width).colwise().reverse();
  return out;
}

}  // namespace detail

/// Full (2N+1)^2 round trip in balanced symmetric form. Its diagonal equals
/// the diagonal of M exp(2 d xi), and it has the same determinant as M.
inline RoundTripMatrix build_matrix(const CylinderPair& pair, Bc bc, double xi, int N,
                                    const ScatteringOptions& opts = {}) {
  const auto bf = detail::balanced_factor(pair, bc, xi, N, opts);
  RoundTripMatrix out;
  out.half_width = N;
  out.entries = bf.sigma * (bf.w.transpose() * bf.w);
  out.prefactor_log = -2.0 * pair.d * xi;
  return out;
}

/// ln det(1 - exp(prefactor_log) entries), by LU with partial pivoting.
inline double log_det_one_minus(const Eigen::MatrixXd& entries, double prefactor_log) {
  if (entries.rows() != entries.cols()) throw DomainError("round trip matrix must be square");
  if (entries.rows() == 0) return 0.0;
  const double scale = std::exp(prefactor_log);
  if (scale * entries.norm() < 1e-4) {
    // 1 - M rounds to the identity here; -sum tr(M^k)/k to k = 4 keeps full relative accuracy.
    const Eigen::MatrixXd m = scale * entries;
    const Eigen::MatrixXd m2 = m * m;
    const double t1 = m.trace(), t2 = m.cwiseProduct(m.transpose()).sum();
    const double t3 = m2.cwiseProduct(m.transpose()).sum(), t4 = m2.cwiseProduct(m2.transpose()).sum();
    return -(t1 + t2 / 2 + t3 / 3 + t4 / 4);
  }
  const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(entries.rows(), entries.cols()) - scale * entries;
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  const Eigen::MatrixXd& u = lu.matrixLU();
  double log_abs = 0.0;
  double sign = lu.permutationP().determinant();
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    const double piv = u(i, i);
    if (piv == 0.0 || !std::isfinite(piv)) throw NonPositiveDeterminant("det(1 - M) vanished or is not finite");
    if (piv < 0.0) sign = -sign;
    log_abs += std::log(std::abs(piv));
  }
  if (sign <= 0.0) throw NonPositiveDeterminant("det(1 - M) <= 0; truncation too small or geometry too extreme");
  return log_abs;
}

inline double log_det_one_minus(const RoundTripMatrix& mat) {
  return log_det_one_minus(mat.entries, mat.prefactor_log);
}

namespace detail {

// X^T X using only the rows where each column is non-negligible; the columns
// of W are concentrated in bands around p ~ (b/a) n.
inline Eigen::MatrixXd banded_gram(const Eigen::MatrixXd& x) {
  const Eigen::Index rows = x.rows(), cols = x.cols();
  std::vector<Eigen::Index> lo(cols), hi(cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    const double cut = 1e-32 * x.col(j).squaredNorm();
    Eigen::Index a = 0, b = rows - 1;
    while (a < b && x(a, j) * x(a, j) <= cut) ++a;
    while (b > a && x(b, j) * x(b, j) <= cut) --b;
    lo[j] = a;
    hi[j] = b;
  }
  Eigen::MatrixXd g(cols, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i <= j; ++i) {
      const Eigen::Index a = std::max(lo[i], lo[j]), b = std::min(hi[i], hi[j]);
      const double v = b >= a ? x.col(i).segment(a, b - a + 1).dot(x.col(j).segment(a, b - a + 1)) : 0.0;
      g(i, j) = v;
      g(j, i) = v;
    }
  return g;
}

}  // namespace detail

/// ln det(1 - M(xi)) at half width N via the even/odd split.
inline double log_det_at(const CylinderPair& pair, Bc bc, double xi, int N, const ScatteringOptions& opts = {},
                         int* p_terms = nullptr) {
  const auto bf = detail::balanced_factor(pair, bc, xi, N, opts);
  if (p_terms) *p_terms = bf.p_terms;
  const Eigen::Index rows = bf.w.rows();
  const double r2 = std::sqrt(0.5);
  Eigen::MatrixXd we(rows, N + 1), wo(rows, N);
  we.col(0) = bf.w.col(N);
  for (int n = 1; n <= N; ++n) {
    we.col(n) = r2 * (bf.w.col(N + n) + bf.w.col(N - n));
    wo.col(n - 1) = r2 * (bf.w.col(N + n) - bf.w.col(N - n));
  }
  const double pre = -2.0 * pair.d * xi;
  double ld = log_det_one_minus(bf.sigma * detail::banded_gram(we), pre);
  if (N > 0) ld += log_det_one_minus(bf.sigma * detail::banded_gram(wo), pre);
  return ld;
}

namespace detail {

// xi nodes. Below xi_s = 1/(2d) the panels are uniform in ln xi, which
// absorbs the ln ln(1/xi) endpoint of Dirichlet integrands; above it they
// are uniform in xi up to xi_s + 20/d, where exp(-2 d xi) < 1e-17.
inline quad::Rule xi_rule(const CylinderPair& pair, int panels, int base_nodes) {
  const double xi_s = 0.5 / pair.d;
  const double xi_min = 1e-6 * std::min(xi_s, 1.0 / std::max(pair.a, pair.b));
  const quad::Rule gl = quad::gauss_legendre(base_nodes);
  quad::Rule r;
  const double t0 = std::log(xi_min), t1 = std::log(xi_s);
  const int n_log = panels * static_cast<int>(std::ceil(0.5 * (t1 - t0)));
  const double ht = (t1 - t0) / n_log;
  for (int k = 0; k < n_log; ++k)
    for (std::size_t i = 0; i < gl.x.size(); ++i) {
      const double xi = std::exp(t0 + ht * (k + 0.5 * (gl.x[i] + 1.0)));
      r.x.push_back(xi);
      r.w.push_back(0.5 * ht * gl.w[i] * xi);
    }
  const int n_lin = 8 * panels;
  const double hx = 20.0 / pair.d / n_lin;
  for (int k = 0; k < n_lin; ++k)
    for (std::size_t i = 0; i < gl.x.size(); ++i) {
      r.x.push_back(xi_s + hx * (k + 0.5 * (gl.x[i] + 1.0)));
      r.w.push_back(0.5 * hx * gl.w[i]);
    }
  return r;
}

template <class F>
void parallel_for(int count, int threads, F&& fn) {
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      try {
        for (int i = t; i < count; i += threads) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

struct GridValue {
  double energy;
  int p_terms_max;
};

// Energy per length on a fixed rule and truncation; summed in node order.
inline GridValue energy_on_rule(const CylinderPair& pair, Bc bc, int N, const quad::Rule& rule,
                                const ScatteringOptions& opts) {
  const int count = static_cast<int>(rule.x.size());
  std::vector<double> vals(count);
  std::vector<int> pt(count);
  parallel_for(count, opts.threads, [&](int i) {
    const double xi = rule.x[i];
    vals[i] = rule.w[i] * xi * log_det_at(pair, bc, xi, N, opts, &pt[i]);
  });
  double acc = 0.0;
  for (double v : vals) acc += v;
  return {acc / (4.0 * std::numbers::pi), *std::max_element(pt.begin(), pt.end())};
}

struct Converged {
  EnergyResult result;
  int panels;
};

inline EnergyResult partial(const GridValue& g, int N, const quad::Rule& rule, double err) {
  EnergyResult r;
  r.value_per_length = g.energy;
  r.err_est = err;
  r.n_matrix = N;
  r.p_terms_max = g.p_terms_max;
  r.xi_nodes = static_cast<int>(rule.x.size());
  r.converged = false;
  return r;
}

inline Converged converge_energy(const CylinderPair& pair, Bc bc, double rel_tol, const ScatteringOptions& opts) {
  require_scalar(bc);
  const auto dp = derive_params(pair);
  if (!(rel_tol >= 1e-10)) throw DomainError("rel_tol must be at least 1e-10");
  if (opts.n_cap < 1) throw DomainError("n_cap must be at least 1");
  int N = std::min(opts.n_cap, static_cast<int>(std::ceil(4.0 + 3.0 * dp.alpha / dp.eps)));

  // Refine the xi grid at the initial truncation, then freeze it.
  // err_est takes the larger of the last grid and truncation differences.
  int panels = 1;
  auto rule = xi_rule(pair, panels, opts.base_nodes);
  GridValue cur = energy_on_rule(pair, bc, N, rule, opts);
  double d_xi = 0.0;
  for (int k = 0;; ++k) {
    if (k == opts.max_xi_doublings)
      throw EnergyNoConvergence("xi integral not converged with " + std::to_string(rule.x.size()) +
                                    " nodes at N=" + std::to_string(N),
                                partial(cur, N, rule, d_xi));
    auto finer = xi_rule(pair, 2 * panels, opts.base_nodes);
    const GridValue next = energy_on_rule(pair, bc, N, finer, opts);
    d_xi = std::abs(next.energy - cur.energy);
    // Keep the coarser grid once the doubling confirms it.
    if (d_xi <= rel_tol * std::abs(next.energy)) break;
    panels *= 2;
    rule = std::move(finer);
    cur = next;
  }

  // Double N on the frozen grid.
  double d_n = 0.0;
  int p_max = cur.p_terms_max;
  while (true) {
    if (N >= opts.n_cap)
      throw EnergyNoConvergence("matrix truncation not converged at N=" + std::to_string(N) + " with " +
                                    std::to_string(rule.x.size()) + " xi nodes",
                                partial(cur, N, rule, d_n > 0.0 ? std::max(d_n, d_xi) : std::abs(cur.energy)));
    const int N2 = std::min(opts.n_cap, 2 * N);
    const GridValue next = energy_on_rule(pair, bc, N2, rule, opts);
    d_n = std::abs(next.energy - cur.energy);
    p_max = std::max(p_max, next.p_terms_max);
    N = N2;
    cur = next;
    if (d_n <= rel_tol * std::abs(cur.energy)) break;
  }

  EnergyResult r;
  r.value_per_length = cur.energy;
  r.err_est = std::max(d_n, d_xi);
  r.n_matrix = N;
  r.p_terms_max = p_max;
  r.xi_nodes = static_cast<int>(rule.x.size());
  r.converged = true;
  return {r, panels};
}

}  // namespace detail

/// Exact interaction energy per unit length.
inline EnergyResult casimir_energy_exact(const CylinderPair& pair, Bc bc, double rel_tol = 1e-6,
                                         const ScatteringOptions& opts = {}) {
  return detail::converge_energy(pair, bc, rel_tol, opts).result;
}

/// Exact force per unit length, F = -dE/dd, from a five-point stencil with
/// h = 1e-3 d and one Richardson step against 2h. The stencil reuses the
/// truncation and xi grid converged at d, so discretization errors are
/// smooth in d and cancel in the differences.
inline EnergyResult casimir_force_exact(const CylinderPair& pair, Bc bc, double rel_tol = 1e-6,
                                        const ScatteringOptions& opts = {}) {
  detail::require_scalar(bc);
  derive_params(pair);
  const double h = 1e-3 * pair.d;
  const double reach = 4.0 * h;
  if (!(pair.d - reach > 0.0) || (pair.kind == Kind::Interior && !(pair.a + pair.d + reach < pair.b)))
    throw StencilDomain("finite-difference stencil leaves the valid geometry");

  const auto base = detail::converge_energy(pair, bc, rel_tol, opts);
  const auto rule = detail::xi_rule(pair, base.panels, opts.base_nodes);
  auto energy_at = [&](double offset) {
    return detail::energy_on_rule(pair.with_gap(pair.d + offset), bc, base.result.n_matrix, rule, opts).energy;
  };
  double e[9];  // offsets -4h..4h
  for (int k = -4; k <= 4; ++k)
    if (k != 0 && k != 3 && k != -3) e[k + 4] = energy_at(k * h);
  auto stencil = [&](int s) {  // derivative with step s*h
    return (-e[4 + 2 * s] + 8.0 * e[4 + s] - 8.0 * e[4 - s] + e[4 - 2 * s]) / (12.0 * s * h);
  };
  const double d1 = stencil(1), d2 = stencil(2);
  EnergyResult r = base.result;
  r.value_per_length = -(d1 + (d1 - d2) / 15.0);
  const double rel_quad = base.result.err_est / std::abs(base.result.value_per_length);
  r.err_est = std::abs(r.value_per_length) * rel_quad + std::abs(d1 - d2) / 15.0;
  return r;
}

}  // namespace cascyl::scatter
