#pragma once

// Modified Bessel functions of half-integer order, I_{l+1/2} and K_{l+1/2}.
//
// Values leave this header either exponentially scaled (I e^{-x}, K e^{x})
// or as natural logarithms. Unscaled K underflows once x exceeds ~700 and
// the small-argument regime needs orders far past what a double can hold,
// so the log sequences are what the scattering and translation code use.

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "casimir/constants.hpp"
#include "casimir/error.hpp"

namespace casimir {

inline constexpr int default_l_ceiling = 200;

struct ScaledBesselPair {
  double i_scaled;  ///< I_{l+1/2}(x) e^{-x}
  double k_scaled;  ///< K_{l+1/2}(x) e^{+x}
  int order_l;
  double argument;
};

/// log I_{l+1/2}(x) and log K_{l+1/2}(x) for l = 0..l_max (unscaled).
struct HalfIntegerBesselLogs {
  double x = 0.0;
  std::vector<double> log_i;
  std::vector<double> log_k;

  int l_max() const { return static_cast<int>(log_i.size()) - 1; }
};

namespace detail {

inline void require_positive_argument(double x, const char* who) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError(std::string(who) + ": argument must be finite and > 0, got " +
                      std::to_string(x));
  }
}

/// I_{nu+1}(x) / I_nu(x) by modified Lentz evaluation of the continued fraction
///   1 / (2(nu+1)/x + 1 / (2(nu+2)/x + ...)).
inline double bessel_i_ratio_cf(double nu, double x) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-17;
  double f = tiny;
  double c = f;
  double d = 0.0;
  for (int k = 1; k < 1000000; ++k) {
    const double b = 2.0 * (nu + k) / x;
    d = b + d;
    if (d == 0.0) d = tiny;
    c = b + 1.0 / c;
    if (c == 0.0) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < eps) return f;
  }
  throw NonConvergence("bessel_i_ratio_cf: continued fraction did not converge");
}

}  // namespace detail

/// log K_{l+1/2}(x) for l = 0..l_max by upward recurrence on the ratios
/// K_{l+3/2}/K_{l+1/2}, which is stable and never overflows.
inline std::vector<double> half_integer_log_k(int l_max, double x) {
  detail::require_positive_argument(x, "half_integer_log_k");
  std::vector<double> out(static_cast<std::size_t>(l_max) + 1);
  out[0] = 0.5 * std::log(pi / (2.0 * x)) - x;
  double ratio = 1.0 + 1.0 / x;  // K_{3/2} / K_{1/2}
  for (int l = 1; l <= l_max; ++l) {
    out[l] = out[l - 1] + std::log(ratio);
    ratio = (2.0 * l + 1.0) / x + 1.0 / ratio;
  }
  return out;
}

/// Both log sequences. I is obtained by downward recurrence on the ratios
/// I_{l+3/2}/I_{l+1/2}, seeded with the exact continued-fraction ratio at the
/// top order, and anchored on I_{1/2}(x) = sqrt(2/(pi x)) sinh x.
inline HalfIntegerBesselLogs half_integer_bessel_logs(int l_max, double x) {
  detail::require_positive_argument(x, "half_integer_bessel_logs");
  if (l_max < 0) throw DomainError("half_integer_bessel_logs: negative order");
  HalfIntegerBesselLogs out;
  out.x = x;
  out.log_k = half_integer_log_k(l_max, x);

  std::vector<double> ratio(static_cast<std::size_t>(l_max) + 1);
  ratio[l_max] = detail::bessel_i_ratio_cf(l_max + 0.5, x);
  for (int l = l_max; l >= 1; --l) {
    ratio[l - 1] = 1.0 / ((2.0 * l + 1.0) / x + ratio[l]);
  }
  out.log_i.resize(static_cast<std::size_t>(l_max) + 1);
  out.log_i[0] = std::log(-std::expm1(-2.0 * x)) - 0.5 * std::log(2.0 * pi * x) + x;
  for (int l = 1; l <= l_max; ++l) {
    out.log_i[l] = out.log_i[l - 1] + std::log(ratio[l - 1]);
  }
  return out;
}

/// Exponentially scaled I_{l+1/2}(x) e^{-x} and K_{l+1/2}(x) e^{x}.
///
/// Throws DomainError for x <= 0 and OverflowError when l exceeds l_ceiling
/// or when a scaled value is not representable as a double (very small x
/// combined with very large l).
inline ScaledBesselPair scaled_bessel_half(int l, double x, int l_ceiling = default_l_ceiling) {
  detail::require_positive_argument(x, "scaled_bessel_half");
  if (l < 0) throw DomainError("scaled_bessel_half: negative order");
  if (l > l_ceiling) {
    throw OverflowError("scaled_bessel_half: order " + std::to_string(l) +
                        " exceeds l_ceiling " + std::to_string(l_ceiling));
  }
  const auto logs = half_integer_bessel_logs(l, x);
  const double i_scaled = std::exp(logs.log_i[l] - x);
  const double k_scaled = std::exp(logs.log_k[l] + x);
  if (!(i_scaled > 0.0) || !std::isfinite(k_scaled)) {
    throw OverflowError("scaled_bessel_half: l=" + std::to_string(l) + ", x=" +
                        std::to_string(x) + " is outside double range");
  }
  return {i_scaled, k_scaled, l, x};
}

/// I_{l+1/2}(x) / K_{l+1/2}(x).
inline double bessel_ratio_mm(int l, double x) {
  detail::require_positive_argument(x, "bessel_ratio_mm");
  const auto logs = half_integer_bessel_logs(l, x);
  const double value = std::exp(logs.log_i[l] - logs.log_k[l]);
  if (!std::isfinite(value)) {
    throw OverflowError("bessel_ratio_mm: ratio overflows at x=" + std::to_string(x));
  }
  return value;
}

}  // namespace casimir
