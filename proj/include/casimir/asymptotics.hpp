#pragma once

// Large-separation (dipole) closed forms in adimensional units:
//   e_ad = 2 pi d^7 E / (hbar c R^6),  s_ad = d^6 S / (k_B R^6) = -e_ad',
//   f_ad = 2 pi d^8 F / (hbar c R^6) = 7 e_ad - z e_ad'.
//
// e_ad(z) = -z sum'_n h(n z) with the per-frequency dipole trace
//   h(q) = e^{-2q} (15/2 + 15 q + 29/2 q^2 + 9 q^3 + 9/2 q^4).
// Summed in closed form with u = e^{-z}:
//   e_ad = -z / (2 (1-u^2)^5) [ (15 - 29z^2 + 99z^4)(u^4+u^6) + 15(1+u^10)/2
//          + (-45 + 58z^2 + 18z^4)(u^2+u^8)/2
//          + 24z ((6z^2-5)(u^4-u^6)/2 + (5+3z^2)(u^2-u^4+u^6-u^8)/4) ].
// The (1-u^2)^{-5} pole cancels against the bracket as z -> 0, so below z = 1
// the Euler-Maclaurin series is used instead:
//   e_ad = -int_0^inf h + sum_k B_2k / (2k)! z^{2k} h^{(2k-1)}(0),
// which converges for |z| < pi. Derivatives come from Jet arithmetic.

#include <array>
#include <boost/math/special_functions/bernoulli.hpp>
#include <boost/math/special_functions/binomial.hpp>
#include <boost/math/special_functions/factorials.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "casimir/error.hpp"
#include "casimir/jet.hpp"

namespace casimir {

struct AdimensionalPoint {
  double z = 0.0;
  double e_ad = 0.0;
  double s_ad = 0.0;
  double f_ad = 0.0;
};

namespace detail {

inline constexpr double dipole_poly[5] = {7.5, 15.0, 14.5, 9.0, 4.5};
inline constexpr double e_ad_zero = -143.0 / 8.0;
inline constexpr int e_series_terms = 40;
inline constexpr double e_series_switch = 1.0;

/// a_k = B_2k / (2k)! h^{(2k-1)}(0), k = 1..e_series_terms (index k-1).
inline const std::array<double, e_series_terms>& e_series_coeffs() {
  static const auto table = [] {
    std::array<double, e_series_terms> a{};
    for (int k = 1; k <= e_series_terms; ++k) {
      const int j = 2 * k - 1;
      double hj = 0.0;
      for (int i = 0; i <= std::min(j, 4); ++i) {
        const double binom = boost::math::binomial_coefficient<double>(j, i);
        hj += binom * std::pow(-2.0, j - i) * boost::math::factorial<double>(i) * dipole_poly[i];
      }
      a[k - 1] = boost::math::bernoulli_b2n<double>(k) / boost::math::factorial<double>(2 * k) * hj;
    }
    return a;
  }();
  return table;
}

template <class T>
T e_ad_series(const T& z) {
  const auto& a = e_series_coeffs();
  const T z2 = z * z;
  // Horner in z^2 from the top.
  T acc(0.0);
  for (int k = e_series_terms; k >= 1; --k) acc = (acc + T(a[k - 1])) * z2;
  return T(e_ad_zero) + acc;
}

template <class T>
T e_ad_closed(const T& z) {
  using std::exp;
  const T u = exp(-z);
  const T u2 = u * u;
  const T u4 = u2 * u2;
  const T u6 = u4 * u2;
  const T u8 = u4 * u4;
  const T u10 = u8 * u2;
  const T z2 = z * z;
  const T z4 = z2 * z2;
  const T bracket = (T(15.0) - 29.0 * z2 + 99.0 * z4) * (u4 + u6) + 7.5 * (T(1.0) + u10) +
                    (T(-45.0) + 58.0 * z2 + 18.0 * z4) * (u2 + u8) * 0.5 +
                    24.0 * z * ((6.0 * z2 - 5.0) * (u4 - u6) * 0.5 + (T(5.0) + 3.0 * z2) * (u2 - u4 + u6 - u8) * 0.25);
  const T w = T(1.0) - u2;
  const T w2 = w * w;
  return -z * bracket / (2.0 * w2 * w2 * w);
}

template <class T>
T e_ad_generic(const T& z) {
  if (value_of(z) < e_series_switch) return e_ad_series(z);
  return e_ad_closed(z);
}

inline void require_nonnegative_z(double z, const char* who) {
  if (!(z >= 0.0) || !std::isfinite(z)) throw DomainError(std::string(who) + ": z must be finite and >= 0");
}

}  // namespace detail

/// Dipole per-frequency trace h(q) = Tr N / r^6.
inline double dipole_summand(double q) {
  double p = 0.0;
  for (int i = 4; i >= 0; --i) p = p * q + detail::dipole_poly[i];
  return std::exp(-2.0 * q) * p;
}

/// e_ad with its first two z-derivatives.
inline Jet e_ad_jet(double z) {
  detail::require_nonnegative_z(z, "e_ad");
  return detail::e_ad_generic(Jet::variable(z));
}

inline double e_ad(double z) {
  detail::require_nonnegative_z(z, "e_ad");
  return detail::e_ad_generic(z);
}

inline double s_ad(double z) { return -e_ad_jet(z).d; }

inline double f_ad(double z) {
  const Jet e = e_ad_jet(z);
  return 7.0 * e.v - z * e.d;
}

/// d f_ad / dz, proportional to dF/dT at fixed d.
inline double f_ad_slope(double z) {
  const Jet e = e_ad_jet(z);
  return 6.0 * e.d - z * e.dd;
}

inline AdimensionalPoint asymptotic_point(double z) {
  const Jet e = e_ad_jet(z);
  return {z, e.v, -e.d, 7.0 * e.v - z * e.d};
}

// Three-term low-temperature forms and two-term high-temperature forms.

inline constexpr double e_low_c6 = -1.0 / 108.0;
inline constexpr double e_low_c8 = 4576.0 / 403200.0;

inline double e_low_T(double z) {
  const double z2 = z * z;
  const double z6 = z2 * z2 * z2;
  return detail::e_ad_zero + e_low_c6 * z6 + e_low_c8 * z6 * z2;
}

inline double s_low_T(double z) {
  const double z2 = z * z;
  const double z5 = z2 * z2 * z;
  return z5 / 18.0 - (18304.0 / 201600.0) * z5 * z2;
}

inline double f_low_T(double z) {
  const double z2 = z * z;
  const double z6 = z2 * z2 * z2;
  // 7 e - z e'
  return 7.0 * detail::e_ad_zero + e_low_c6 * z6 - e_low_c8 * z6 * z2;
}

inline double e_high_T(double z) {
  const double p = 15.0 + z * (30.0 + z * (29.0 + z * (18.0 + 9.0 * z)));
  return -3.75 * z - 0.5 * z * p * std::exp(-2.0 * z);
}

inline double s_high_T(double z) {
  const double p = 15.0 + z * (30.0 + z * (27.0 + z * (14.0 + z * (9.0 - 18.0 * z))));
  return 3.75 + 0.5 * p * std::exp(-2.0 * z);
}

inline double f_high_T(double z) {
  // 7 e - z e' with e' = -s_high_T
  return 7.0 * e_high_T(z) + z * s_high_T(z);
}

/// Positive zeros of s_ad located by a sign scan on (0, z_hi] and refined by TOMS 748.
inline std::vector<double> entropy_zeros_in(double z_lo, double z_hi, int samples = 2000) {
  std::vector<double> roots;
  double a = z_lo;
  double sa = s_ad(a);
  for (int i = 1; i <= samples; ++i) {
    const double b = z_lo + (z_hi - z_lo) * i / samples;
    const double sb = s_ad(b);
    if (sa == 0.0) roots.push_back(a);
    if (sa * sb < 0.0) {
      boost::uintmax_t iters = 200;
      auto tol = boost::math::tools::eps_tolerance<double>(50);
      const auto br = boost::math::tools::toms748_solve([](double z) { return s_ad(z); }, a, b, sa, sb, tol, iters);
      roots.push_back(0.5 * (br.first + br.second));
    }
    a = b;
    sa = sb;
  }
  return roots;
}

/// The two positive zeros z1 < z2 of the asymptotic entropy.
inline std::pair<double, double> find_entropy_zeros() {
  const auto roots = entropy_zeros_in(0.05, 20.0);
  if (roots.size() != 2) {
    throw BracketingFailure("find_entropy_zeros: expected two sign changes of s_ad, found " +
                            std::to_string(roots.size()));
  }
  return {roots[0], roots[1]};
}

/// Local maximum of E/E0 = e_ad(z) / e_ad(0): the point where e_ad' = 0 with
/// e_ad at a minimum, i.e. the first entropy zero. Returns (z*, E/E0 - 1).
inline std::pair<double, double> find_e_ratio_max() {
  const auto roots = entropy_zeros_in(0.5, 2.0, 300);
  for (double z : roots) {
    const Jet e = e_ad_jet(z);
    // ratio = e / e0 with e0 < 0 is maximal where e has a minimum: e'' > 0.
    if (e.dd > 0.0) return {z, e.v / detail::e_ad_zero - 1.0};
  }
  throw BracketingFailure("find_e_ratio_max: no local maximum of E/E0 in [0.5, 2]");
}

}  // namespace casimir
