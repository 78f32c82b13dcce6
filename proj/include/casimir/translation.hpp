#pragma once

// Translation of vector multipole waves along the common z axis.
//
// Waves: M_lm = curl(r psi_lm) / sqrt(l(l+1)), N_lm = curl(M_lm) / kappa, with
// psi built on k_l for outgoing and on i_l for regular waves, where
// k_l(x) = sqrt(2/(pi x)) K_{l+1/2}(x) and i_l(x) = sqrt(pi/(2x)) I_{l+1/2}(x).
//
// An outgoing wave about centre 1 re-expands about centre 2 = centre 1 - d z
// as regular waves of the same m,
//   M_l = sum_l' A_l'l M_l' + i B_l'l N_l',   N_l = sum_l' A_l'l N_l' - i B_l'l M_l',
// with the scalar coefficient
//   alpha_l'l = (-1)^{l'+m} sqrt((2l+1)(2l'+1)) sum_nu (2nu+1) (l l' nu;0 0 0) (l l' nu;m -m 0) k_nu(kappa d)
// and
//   A_l'l = sum_nu alpha_l'l[nu] (l(l+1) + l'(l'+1) - nu(nu+1)) / (2 sqrt(l(l+1) l'(l'+1)))
//   B_l'l = m kappa d alpha_l'l / sqrt(l(l+1) l'(l'+1)).
// Conjugating with diag(1, i) over (M, E) makes the block real: [[A, B], [B, A]].
//
// Entries are stored as U_ab = entries_ab * exp(log_scale_a + log_scale_b + scaling_exponent),
// with log_scale_a = log k^sc_{2l}(kappa d) / 2 and k^sc_nu = k_nu e^{x}. Since log k^sc_nu
// is convex and increasing in nu, every summand is bounded by the row/column
// scales and the stored entries stay O(1) for any kappa d.

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "casimir/error.hpp"
#include "casimir/specfun.hpp"
#include "casimir/wigner.hpp"

namespace casimir {

struct TranslationBlock {
  int m = 0;
  double kappa_d = 0.0;
  int l_max = 0;
  int l_min = 1;                  ///< max(|m|, 1)
  Eigen::MatrixXd entries;        ///< (l', P') x (l, P), M block first, then E
  std::vector<double> log_scale;  ///< per row/column index
  double scaling_exponent = 0.0;  ///< -kappa d

  int size() const { return static_cast<int>(entries.rows()); }
  int order_of(int index) const { return l_min + index % (l_max - l_min + 1); }
  bool is_electric(int index) const { return index >= l_max - l_min + 1; }

  /// Plain matrix; may underflow or overflow for extreme kappa d.
  Eigen::MatrixXd unscaled() const {
    Eigen::MatrixXd u = entries;
    for (int a = 0; a < u.rows(); ++a) {
      for (int b = 0; b < u.cols(); ++b) {
        u(a, b) *= std::exp(log_scale[a] + log_scale[b] + scaling_exponent);
      }
    }
    return u;
  }
};

namespace detail {

/// kappa-independent part of the scalar coefficients for one m:
/// s(l, l', nu) = (-1)^m sqrt((2l+1)(2l'+1)) (2nu+1) (l l' nu;000)(l l' nu;m -m 0),
/// for l <= l', nu = l'-l, l'-l+2, ..., l'+l. Symmetric in l and l'.
class MCouplings {
 public:
  MCouplings(int m, int l_max) : m_(m), l_max_(l_max), l_min_(std::max(m, 1)) {
    const int n = l_max_ - l_min_ + 1;
    offsets_.assign(static_cast<std::size_t>(n) * n, 0);
    std::size_t total = 0;
    for (int l = l_min_; l <= l_max_; ++l) {
      for (int lp = l; lp <= l_max_; ++lp) {
        offsets_[index(l, lp)] = total;
        total += static_cast<std::size_t>(l) + 1;
      }
    }
    data_.resize(total);
    const double sign_m = (m % 2 == 0) ? 1.0 : -1.0;
    for (int l = l_min_; l <= l_max_; ++l) {
      for (int lp = l; lp <= l_max_; ++lp) {
        const auto w0 = wigner3j_family(l, lp, 0, 0);
        const auto wm = wigner3j_family(l, lp, m, -m);
        const double pre = sign_m * std::sqrt((2.0 * l + 1.0) * (2.0 * lp + 1.0));
        double* out = data_.data() + offsets_[index(l, lp)];
        for (int k = 0; k <= l; ++k) {
          const int nu = lp - l + 2 * k;
          out[k] = pre * (2.0 * nu + 1.0) * w0(nu) * wm(nu);
        }
      }
    }
  }

  int m() const { return m_; }
  int l_max() const { return l_max_; }

  /// l + 1 coefficients for nu = l'-l, ..., l'+l in steps of 2 (requires l <= l').
  const double* coeffs(int l, int lp) const { return data_.data() + offsets_[index(l, lp)]; }

 private:
  std::size_t index(int l, int lp) const {
    const int n = l_max_ - l_min_ + 1;
    return static_cast<std::size_t>(l - l_min_) * n + (lp - l_min_);
  }

  int m_;
  int l_max_;
  int l_min_;
  std::vector<std::size_t> offsets_;
  std::vector<double> data_;
};

inline constexpr int coupling_cache_l_max = default_l_ceiling;

/// Shared, lazily built coupling tables, one per m. Memory grows like l_max^3
/// per m, and only the few m that survive the m truncation are ever built.
inline std::shared_ptr<const MCouplings> couplings_for(int m, int l_max) {
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const MCouplings>> cache;
  if (l_max > coupling_cache_l_max) return std::make_shared<const MCouplings>(m, l_max);
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(m);
    if (it != cache.end() && it->second->l_max() >= l_max) return it->second;
  }
  // Build outside the lock; grow in steps so repeated doubling does not rebuild often.
  const int build = std::min(coupling_cache_l_max, std::max(l_max, 2 * l_max - l_max / 2));
  auto table = std::make_shared<const MCouplings>(m, build);
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[m];
  if (!slot || slot->l_max() < table->l_max()) slot = table;
  return slot;
}

/// log k^sc_nu(x) for nu = 0..n, k^sc_nu = k_nu e^{x}.
inline std::vector<double> log_scaled_k_sequence(int n, double x) {
  auto out = half_integer_log_k(n, x);
  const double shift = 0.5 * std::log(2.0 / (pi * x)) + x;
  for (auto& v : out) v += shift;
  return out;
}

}  // namespace detail

/// Translation block for azimuthal index m. direction = +1 maps outgoing waves
/// of sphere 1 to regular waves at sphere 2 (sphere 2 lies at -d z from sphere 1);
/// direction = -1 is the reverse translation.
inline TranslationBlock translation_block(int m, double kappa_d, int l_max, int direction = +1) {
  if (!(kappa_d > 0.0) || !std::isfinite(kappa_d)) {
    throw DomainError("translation_block: kappa_d must be finite and > 0");
  }
  const int am = std::abs(m);
  if (l_max < 1 || am > l_max) {
    throw DomainError("translation_block: need 1 <= l_max and |m| <= l_max (m=" + std::to_string(m) +
                      ", l_max=" + std::to_string(l_max) + ")");
  }
  TranslationBlock out;
  out.m = m;
  out.kappa_d = kappa_d;
  out.l_max = l_max;
  out.l_min = std::max(am, 1);
  out.scaling_exponent = -kappa_d;
  const int n = l_max - out.l_min + 1;
  out.entries.setZero(2 * n, 2 * n);
  out.log_scale.resize(static_cast<std::size_t>(2 * n));

  const auto logk = detail::log_scaled_k_sequence(2 * l_max, kappa_d);
  // step[nu] = k^sc_{nu-2} / k^sc_nu  (<= 1)
  std::vector<double> step(logk.size(), 0.0);
  for (std::size_t nu = 2; nu < logk.size(); ++nu) step[nu] = std::exp(logk[nu - 2] - logk[nu]);
  for (int i = 0; i < n; ++i) {
    const double s = 0.5 * logk[2 * (out.l_min + i)];
    out.log_scale[i] = s;
    out.log_scale[n + i] = s;
  }

  const auto table = detail::couplings_for(am, l_max);
  const double sign_b = (m < 0 ? -1.0 : 1.0) * (direction < 0 ? -1.0 : 1.0);
  for (int l = out.l_min; l <= l_max; ++l) {
    const double ll = l * (l + 1.0);
    for (int lp = l; lp <= l_max; ++lp) {
      const double llp = lp * (lp + 1.0);
      const double* c = table->coeffs(l, lp);
      const double norm = std::sqrt(ll * llp);
      // Descend from nu = l + lp, where the scaled Bessel factor is largest.
      int nu = l + lp;
      double kfac = std::exp(logk[nu] - 0.5 * logk[2 * l] - 0.5 * logk[2 * lp]);
      double sa = 0.0;
      double salpha = 0.0;
      const double nu_sign = (direction < 0 && ((l + lp) % 2 != 0)) ? -1.0 : 1.0;
      for (int k = l; k >= 0; --k) {
        const double term = c[k] * kfac;
        salpha += term;
        sa += term * (ll + llp - nu * (nu + 1.0));
        if (k > 0) {
          kfac *= step[nu];
          nu -= 2;
        }
      }
      sa *= nu_sign / (2.0 * norm);
      salpha *= nu_sign;
      const double sb = sign_b * am * kappa_d * salpha / norm;
      const int i = l - out.l_min;
      const int j = lp - out.l_min;
      const double row_lp = (lp % 2 == 0) ? 1.0 : -1.0;
      const double row_l = (l % 2 == 0) ? 1.0 : -1.0;
      // Row l', column l
      out.entries(j, i) = row_lp * sa;
      out.entries(n + j, n + i) = row_lp * sa;
      out.entries(j, n + i) = row_lp * sb;
      out.entries(n + j, i) = row_lp * sb;
      if (lp != l) {
        out.entries(i, j) = row_l * sa;
        out.entries(n + i, n + j) = row_l * sa;
        out.entries(i, n + j) = row_l * sb;
        out.entries(n + i, j) = row_l * sb;
      }
    }
  }
  return out;
}

/// Closed-form l = l' = 1 couplings at q = kappa d, as the real 2x2 block
/// [[A, B], [B, A]] over (M, E) for m in {-1, 0, 1}.
struct DipoleCouplings {
  double a0;  ///< A for m = 0
  double a1;  ///< A for |m| = 1
  double b1;  ///< B for m = +1 (B for m = -1 is -b1, B for m = 0 is 0)

  Eigen::Matrix2d block(int m) const {
    const double a = (m == 0) ? a0 : a1;
    const double b = (m == 0) ? 0.0 : (m > 0 ? b1 : -b1);
    Eigen::Matrix2d u;
    u << a, b, b, a;
    return u;
  }
};

inline DipoleCouplings dipole_translation_limit(double q) {
  const double e = std::exp(-q);
  const double q2 = q * q;
  const double q3 = q2 * q;
  return {3.0 * (1.0 + q) * e / q3, -1.5 * (1.0 + q + q2) * e / q3, 1.5 * (1.0 + q) * e / q2};
}

}  // namespace casimir
