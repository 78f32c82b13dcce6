#pragma once

// Round-trip operator N = T U12 T U21 and log det(I - N) per Matsubara frequency.
//
// With P = diag((-1)^l on M, -(-1)^l on E) the reverse translation is
// U21 = P U12 P. T and P are diagonal, so det(I - N) = det(I - X^2) with
// X = P T U12, and a similarity by |T|^{1/2} gives the balanced form
//   X_ab = sigma_a p_a sqrt(|t_a t_b|) U_ab,   sigma_a = sign(t_a).
// Everything is assembled from logarithms (T ~ (kappa R)^{2l+1} and
// U ~ (kappa d)^{-(l+l'+1)}), so no intermediate over- or underflows.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "casimir/error.hpp"
#include "casimir/geometry.hpp"
#include "casimir/scattering.hpp"
#include "casimir/translation.hpp"

namespace casimir {

struct RoundTripBlock {
  int m = 0;
  double kappa = 0.0;
  Eigen::MatrixXd matrix;  ///< N_m, (l', P') x (l, P), M block first
};

struct LogDetResult {
  double value = 0.0;
  int l_max_used = 0;
  int m_max_used = 0;
  bool converged = false;
  /// |change| over the last l_max increase (absolute).
  double est_truncation_error = 0.0;
};

struct RoundTripOptions {
  double tol = 1e-9;        ///< relative tolerance on the l_max and m truncations
  double abs_tol = 0.0;     ///< absolute floor for the same tests
  int l_max_fixed = 0;      ///< > 0 disables the adaptive policy
  int l_start = 0;          ///< > 0 overrides the first l_max
  int l_ceiling = default_l_ceiling;
  double growth = 2.0;      ///< l_max multiplier between refinements
  int confirmations = 2;    ///< consecutive small changes required
};

namespace detail {

/// Balanced X for one m >= 0 at q = kappa d; t holds T at kappa R.
inline Eigen::MatrixXd balanced_roundtrip_factor(int m, double q, int l_max, const TMatrixBlock& t) {
  const auto u = translation_block(m, q, l_max);
  const int n = l_max - u.l_min + 1;
  std::vector<double> phi(static_cast<std::size_t>(2 * n));
  std::vector<double> sp(static_cast<std::size_t>(2 * n));
  for (int i = 0; i < n; ++i) {
    const int l = u.l_min + i;
    const double parity = (l % 2 == 0) ? 1.0 : -1.0;
    phi[i] = 0.5 * t.log_abs_mm[l - 1] + u.log_scale[i] + 0.5 * u.scaling_exponent;
    phi[n + i] = 0.5 * t.log_abs_ee[l - 1] + u.log_scale[n + i] + 0.5 * u.scaling_exponent;
    sp[i] = -parity;       // sigma = -1 for M, p = (-1)^l
    sp[n + i] = -parity;   // sigma = +1 for E, p = -(-1)^l
  }
  Eigen::MatrixXd x(2 * n, 2 * n);
  std::vector<double> ephi(phi.size());
  for (std::size_t a = 0; a < phi.size(); ++a) ephi[a] = std::exp(phi[a]);
  for (int b = 0; b < 2 * n; ++b) {
    for (int a = 0; a < 2 * n; ++a) {
      x(a, b) = sp[a] * u.entries(a, b) * ephi[a] * ephi[b];
    }
  }
  return x;
}

/// log det(I - Y) for Y with small row sums: unpivoted elimination on I - Y
/// that carries only the deviations of the pivots from 1, so the result keeps
/// full relative accuracy however small log det is.
inline bool logdet_identity_minus_small(Eigen::MatrixXd g, double& out) {
  // g holds -Y on entry; pivots are 1 + g(k,k).
  const int n = static_cast<int>(g.rows());
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    const double pivot = 1.0 + g(k, k);
    if (!(pivot > 0.0)) return false;
    sum += std::log1p(g(k, k));
    if (k + 1 < n) {
      const int rest = n - k - 1;
      Eigen::VectorXd lcol = g.col(k).tail(rest) / pivot;
      g.bottomRightCorner(rest, rest).noalias() -= lcol * g.row(k).tail(rest);
    }
  }
  out = sum;
  return true;
}

inline double logdet_identity_minus(const Eigen::MatrixXd& y, int m, double q) {
  const int n = static_cast<int>(y.rows());
  const double row_norm = y.cwiseAbs().rowwise().sum().maxCoeff();
  if (row_norm < 0.5) {
    double v = 0.0;
    if (logdet_identity_minus_small(-y, v)) return v;
  }
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) - y;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  const auto& f = lu.matrixLU();
  double sign = lu.permutationP().determinant();
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    const double u = f(k, k);
    if (u == 0.0) sign = 0.0;
    if (u < 0.0) sign = -sign;
    sum += std::log(std::abs(u));
  }
  if (!(sign > 0.0)) {
    throw SpectralRadiusError("det(I - N) <= 0 at m=" + std::to_string(m) + ", kappa d=" + std::to_string(q));
  }
  return sum;
}

/// log det(I - N_m) at q = kappa d for one m >= 0.
inline double logdet_block(int m, double q, int l_max, const TMatrixBlock& t) {
  const Eigen::MatrixXd x = balanced_roundtrip_factor(m, q, l_max, t);
  const Eigen::MatrixXd y = x * x;
  return logdet_identity_minus(y, m, q);
}

inline void require_ratio(double r, const char* who) {
  if (!(r > 0.0) || !(r < 0.5)) {
    throw DomainError(std::string(who) + ": need 0 < R/d < 1/2, got " + std::to_string(r));
  }
}

/// Sum over m at fixed l_max: sum_m w_m log det(I - N_m), w_0 = 1, w_m = 2.
inline double logdet_sum_over_m(double r, double q, int l_max, double tol, double abs_tol, int& m_used) {
  const auto t = tmatrix_block(q * r, l_max);
  double acc = 0.0;
  m_used = 0;
  for (int m = 0; m <= l_max; ++m) {
    const double w = (m == 0) ? 1.0 : 2.0;
    const double c = w * logdet_block(m, q, l_max, t);
    acc += c;
    m_used = m;
    if (m > 0 && std::abs(c) <= std::max(tol * std::abs(acc), abs_tol)) break;
  }
  return acc;
}

}  // namespace detail

/// First l_max of the adaptive policy.
inline int initial_l_max(double r) { return std::max(4, static_cast<int>(std::ceil(5.0 * r / (1.0 - 2.0 * r)))); }

/// log det(I - N) in adimensional form: r = R/d, q = kappa d.
inline LogDetResult logdet_one_minus_n_adim(double r, double q, const RoundTripOptions& opt = {}) {
  detail::require_ratio(r, "logdet_one_minus_n");
  if (!(q > 0.0) || !std::isfinite(q)) throw DomainError("logdet_one_minus_n: kappa must be finite and > 0");
  LogDetResult res;
  if (opt.l_max_fixed > 0) {
    res.value = detail::logdet_sum_over_m(r, q, opt.l_max_fixed, opt.tol, opt.abs_tol, res.m_max_used);
    res.l_max_used = opt.l_max_fixed;
    res.converged = true;
    return res;
  }
  int l_max = opt.l_start > 0 ? opt.l_start : initial_l_max(r);
  if (l_max > opt.l_ceiling) {
    throw NonConvergence("logdet_one_minus_n: starting l_max " + std::to_string(l_max) + " exceeds l_ceiling " +
                         std::to_string(opt.l_ceiling) + " (r=" + std::to_string(r) + ")");
  }
  int m_used = 0;
  double prev = detail::logdet_sum_over_m(r, q, l_max, opt.tol, opt.abs_tol, m_used);
  int small = 0;
  double change = 0.0;
  while (true) {
    int next = std::max(l_max + 1, static_cast<int>(std::ceil(l_max * opt.growth)));
    if (next > opt.l_ceiling) {
      if (l_max < opt.l_ceiling) {
        next = opt.l_ceiling;
      } else {
        throw NonConvergence("logdet_one_minus_n: l_max would exceed l_ceiling " +
                             std::to_string(opt.l_ceiling) + " (r=" + std::to_string(r) +
                             ", kappa d=" + std::to_string(q) + ", last change " + std::to_string(change) + ")");
      }
    }
    const double cur = detail::logdet_sum_over_m(r, q, next, opt.tol, opt.abs_tol, m_used);
    change = std::abs(cur - prev);
    l_max = next;
    prev = cur;
    if (change <= std::max(opt.tol * std::abs(cur), opt.abs_tol)) {
      if (++small >= opt.confirmations) break;
    } else {
      small = 0;
    }
  }
  res.value = prev;
  res.l_max_used = l_max;
  res.m_max_used = m_used;
  res.est_truncation_error = change;
  res.converged = true;
  return res;
}

inline LogDetResult logdet_one_minus_n(const Geometry& g, double kappa, double tol) {
  RoundTripOptions opt;
  opt.tol = tol;
  return logdet_one_minus_n_adim(g.r(), kappa * g.d, opt);
}

/// Explicit N_m = T U12 T U21 at fixed l_max (for inspection and tests).
inline RoundTripBlock round_trip_block(const Geometry& g, double kappa, int m, int l_max) {
  const double q = kappa * g.d;
  const auto t = tmatrix_block(kappa * g.R, l_max);
  const auto u12 = translation_block(m, q, l_max, +1).unscaled();
  const auto u21 = translation_block(m, q, l_max, -1).unscaled();
  const int lmin = std::max(std::abs(m), 1);
  const int n = l_max - lmin + 1;
  Eigen::VectorXd tdiag(2 * n);
  for (int i = 0; i < n; ++i) {
    tdiag[i] = t.diag_mm[lmin + i - 1];
    tdiag[n + i] = t.diag_ee[lmin + i - 1];
  }
  RoundTripBlock out;
  out.m = m;
  out.kappa = kappa;
  out.matrix = tdiag.asDiagonal() * u12 * tdiag.asDiagonal() * u21;
  return out;
}

/// -Tr N restricted to l = l' = 1 with the small-sphere dipole T-matrices.
inline double dipole_trace(const Geometry& g, double kappa) {
  const double q = kappa * g.d;
  const auto [t_m, t_e] = dipole_tmatrix(q, g.r());
  const auto c = dipole_translation_limit(q);
  Eigen::Matrix2d t;
  t << t_m, 0.0, 0.0, t_e;
  // l = 1: P = diag(-1, +1)
  Eigen::Matrix2d p;
  p << -1.0, 0.0, 0.0, 1.0;
  double tr = 0.0;
  for (int m = -1; m <= 1; ++m) {
    const Eigen::Matrix2d u = c.block(m);
    tr += (t * u * t * p * u * p).trace();
  }
  return -tr;
}

}  // namespace casimir
