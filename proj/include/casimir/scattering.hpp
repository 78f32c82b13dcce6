#pragma once

// T-matrix of a perfectly conducting sphere at imaginary frequency.
//
// Diagonal in (l, m, polarisation) and independent of m. With x = kappa R,
//   T_M(l) = -(pi/2) I_{l+1/2}(x) / K_{l+1/2}(x)
//   T_E(l) = -(pi/2) [l I_{l+1/2} - x I_{l-1/2}] / [l K_{l+1/2} + x K_{l-1/2}].
// The E numerator cancels badly at small x; the recurrence
// x I_{l-1/2} = (2l+1) I_{l+1/2} + x I_{l+3/2} turns it into the sum
// (l+1) I_{l+1/2} + x I_{l+3/2}, which has no cancellation at all.

#include <array>
#include <cmath>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "casimir/constants.hpp"
#include "casimir/error.hpp"
#include "casimir/specfun.hpp"

namespace casimir {

enum class Polarization { M, E };

struct MultipoleIndex {
  int l = 1;
  int m = 0;
  Polarization pol = Polarization::M;
};

/// One sphere's T-matrix diagonal for l = 1..l_max, as values and as
/// log-magnitudes. Entry [l-1] holds order l. Values underflow to zero long
/// before the logs lose meaning, so the round-trip code reads the logs.
struct TMatrixBlock {
  double kappa_R = 0.0;
  int l_max = 0;
  std::vector<double> diag_mm;
  std::vector<double> diag_ee;
  std::vector<double> log_abs_mm;
  std::vector<double> log_abs_ee;
};

namespace detail {

inline void require_positive_kappa_r(double x, const char* who) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError(std::string(who) + ": kappa_R must be finite and > 0");
  }
}

inline constexpr double log_half_pi = 0.45158270528945486;

inline double log_abs_tmatrix_ee(const HalfIntegerBesselLogs& b, int l) {
  const double x = b.x;
  const double num = b.log_i[l] + std::log((l + 1.0) + x * std::exp(b.log_i[l + 1] - b.log_i[l]));
  const double den = b.log_k[l] + std::log(l + x * std::exp(b.log_k[l - 1] - b.log_k[l]));
  return log_half_pi + num - den;
}

inline double log_abs_tmatrix_mm(const HalfIntegerBesselLogs& b, int l) {
  return log_half_pi + b.log_i[l] - b.log_k[l];
}

}  // namespace detail

inline TMatrixBlock tmatrix_block(double kappa_R, int l_max) {
  detail::require_positive_kappa_r(kappa_R, "tmatrix_block");
  if (l_max < 1) throw DomainError("tmatrix_block: l_max must be >= 1");
  const auto b = half_integer_bessel_logs(l_max + 1, kappa_R);
  TMatrixBlock out;
  out.kappa_R = kappa_R;
  out.l_max = l_max;
  out.diag_mm.resize(static_cast<std::size_t>(l_max));
  out.diag_ee.resize(static_cast<std::size_t>(l_max));
  out.log_abs_mm.resize(static_cast<std::size_t>(l_max));
  out.log_abs_ee.resize(static_cast<std::size_t>(l_max));
  for (int l = 1; l <= l_max; ++l) {
    const double lm = detail::log_abs_tmatrix_mm(b, l);
    const double le = detail::log_abs_tmatrix_ee(b, l);
    out.log_abs_mm[l - 1] = lm;
    out.log_abs_ee[l - 1] = le;
    out.diag_mm[l - 1] = -std::exp(lm);
    out.diag_ee[l - 1] = std::exp(le);
  }
  return out;
}

/// Magnetic (TE) element; strictly negative.
inline double tmatrix_mm(int l, double kappa_R) {
  detail::require_positive_kappa_r(kappa_R, "tmatrix_mm");
  if (l < 1) throw DomainError("tmatrix_mm: l must be >= 1");
  const auto b = half_integer_bessel_logs(l, kappa_R);
  return -std::exp(detail::log_abs_tmatrix_mm(b, l));
}

/// Electric (TM) element; strictly positive.
inline double tmatrix_ee(int l, double kappa_R) {
  detail::require_positive_kappa_r(kappa_R, "tmatrix_ee");
  if (l < 1) throw DomainError("tmatrix_ee: l must be >= 1");
  const auto b = half_integer_bessel_logs(l + 1, kappa_R);
  return std::exp(detail::log_abs_tmatrix_ee(b, l));
}

namespace detail {

/// log|c_{l,P}| for l = 1..l_ceiling, from the numeric small-argument limit
/// of log|T| - (2l+1) log x. The remainder is even in x, so two Richardson
/// levels in x^2 leave an O(x^6) error.
inline const std::vector<std::array<double, 2>>& static_log_coeff_table() {
  static std::vector<std::array<double, 2>> table;
  static std::once_flag once;
  std::call_once(once, [] {
    constexpr double h = 1e-2;
    const std::array<double, 3> xs{h, h / 2, h / 4};
    std::array<HalfIntegerBesselLogs, 3> logs;
    for (int i = 0; i < 3; ++i) logs[i] = half_integer_bessel_logs(default_l_ceiling + 1, xs[i]);
    table.resize(static_cast<std::size_t>(default_l_ceiling) + 1);
    for (int l = 1; l <= default_l_ceiling; ++l) {
      for (int p = 0; p < 2; ++p) {
        std::array<double, 3> g{};
        for (int i = 0; i < 3; ++i) {
          const double lt = p == 0 ? log_abs_tmatrix_mm(logs[i], l) : log_abs_tmatrix_ee(logs[i], l);
          g[i] = lt - (2.0 * l + 1.0) * std::log(xs[i]);
        }
        const double r1 = (4.0 * g[1] - g[0]) / 3.0;
        const double r2 = (4.0 * g[2] - g[1]) / 3.0;
        table[l][p] = (16.0 * r2 - r1) / 15.0;
      }
    }
  });
  return table;
}

}  // namespace detail

/// log|c_{l,P}|, usable where c itself underflows (l beyond ~ 80).
inline double tmatrix_static_log_coeff(int l, Polarization pol) {
  if (l < 1 || l > default_l_ceiling) {
    throw DomainError("tmatrix_static_log_coeff: l out of range [1, l_ceiling]");
  }
  return detail::static_log_coeff_table()[l][pol == Polarization::M ? 0 : 1];
}

/// c_{l,P} with T_P(l, x) ~ c_{l,P} x^{2l+1} as x -> 0.
inline double tmatrix_static_coeff(int l, Polarization pol) {
  const double mag = std::exp(tmatrix_static_log_coeff(l, pol));
  return pol == Polarization::M ? -mag : mag;
}

/// Dipole (l = 1) elements at q = kappa d: (-(qR/d)^3 / 3, 2 (qR/d)^3 / 3).
inline std::pair<double, double> dipole_tmatrix(double q, double R_over_d) {
  const double y = q * R_over_d;
  const double y3 = y * y * y;
  return {-y3 / 3.0, 2.0 * y3 / 3.0};
}

}  // namespace casimir
