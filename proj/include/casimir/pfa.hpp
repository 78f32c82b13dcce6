#pragma once

// Proximity force approximation for two equal perfectly conducting spheres.
//
// Parallel plates at separation L, perfect metal, after the k_perp integral:
//   e_par(L) = -(k_B T / (4 pi L^2)) sum'_n [2 n x Li_2(e^{-2nx}) + Li_3(e^{-2nx})],  x = L / lambda_T.
// Sphere-sphere energy and its short-gap limit (x = ell / lambda_T):
//   E = 2 pi R^2 int_0^1 dt (1 - t) e_par(ell + 2 R t)
//   E -> -(k_B T R / (4 ell)) sum'_n Li_3(e^{-2nx})
//   S  =  (k_B R / (4 ell))   sum'_n [Li_3 - 2 n x Li_2]
//   F  = -(k_B T R / (4 ell^2)) sum'_n [Li_3 + 2 n x Li_2]
// The m-sums are done in closed form as polylogarithms; only n is summed.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <string>

#include "casimir/constants.hpp"
#include "casimir/error.hpp"
#include "casimir/polylog.hpp"

namespace casimir {

struct PfaPoint {
  double ell = 0.0;  ///< surface gap
  double R = 0.0;
  double T = 0.0;
  double x = 0.0;    ///< ell / lambda_T

  static PfaPoint make(double ell, double R, double T) {
    if (!(ell > 0.0) || !(R > 0.0)) throw DomainError("pfa: ell and R must be > 0");
    if (!(T >= 0.0)) throw DomainError("pfa: T must be >= 0");
    return {ell, R, T, 2.0 * pi * si::k_B * T * ell / si::hbar_c};
  }
};

namespace detail {

/// sum'_{n>=0} g(n) for the plate kernels, x > 0.
///   Kind 0: Li3,   Kind 1: Li3 - 2nx Li2,   Kind 2: Li3 + 2nx Li2
template <int Kind>
double pfa_sum(double x) {
  if (!(x > 0.0)) throw DomainError("pfa_sum: x must be > 0 (use the T = 0 branch)");
  double sum = 0.5 * zeta3;
  for (long n = 1; n < 100000000; ++n) {
    const double mu = 2.0 * n * x;
    const double li3 = polylog3_exp(mu);
    double term = li3;
    if constexpr (Kind != 0) {
      const double li2 = polylog2_exp(mu);
      term += (Kind == 1 ? -1.0 : 1.0) * mu * li2;
    }
    sum += term;
    if (mu > 1.0 && std::abs(term) < 1e-17 * std::abs(sum)) return sum;
  }
  throw NonConvergence("pfa_sum: n-sum did not terminate");
}

}  // namespace detail

/// sum'_n Li3(e^{-2nx}).
inline double pfa_energy_series(double x) { return detail::pfa_sum<0>(x); }
/// sum'_n [Li3 - 2nx Li2].
inline double pfa_entropy_series(double x) { return detail::pfa_sum<1>(x); }
/// sum'_n [Li3 + 2nx Li2].
inline double pfa_force_series(double x) { return detail::pfa_sum<2>(x); }

/// Energy per unit area of two perfectly conducting plates at distance L.
inline double plate_energy_density(double L, double T) {
  if (!(L > 0.0)) throw DomainError("plate_energy_density: separation must be > 0");
  if (!(T >= 0.0)) throw DomainError("plate_energy_density: T must be >= 0");
  if (T == 0.0) return -si::hbar_c * pi * pi / (720.0 * L * L * L);
  const double x = 2.0 * pi * si::k_B * T * L / si::hbar_c;
  return -(si::k_B * T / (4.0 * pi * L * L)) * pfa_force_series(x);
}

inline double pfa_quantum_limit(double ell, double R) { return -si::hbar_c * pi * pi * pi * R / (1440.0 * ell * ell); }

inline double pfa_classical_limit(double ell, double R, double T) { return -si::k_B * T * R * zeta3 / (8.0 * ell); }

inline double pfa_energy_sum(const PfaPoint& p) {
  if (p.T == 0.0) return pfa_quantum_limit(p.ell, p.R);
  return -(si::k_B * p.T * p.R / (4.0 * p.ell)) * pfa_energy_series(p.x);
}

inline double pfa_entropy(const PfaPoint& p) {
  if (p.T == 0.0) return 0.0;
  return (si::k_B * p.R / (4.0 * p.ell)) * pfa_entropy_series(p.x);
}

inline double pfa_force(const PfaPoint& p) {
  if (p.T == 0.0) return -2.0 * si::hbar_c * pi * pi * pi * p.R / (1440.0 * p.ell * p.ell * p.ell);
  return -(si::k_B * p.T * p.R / (4.0 * p.ell * p.ell)) * pfa_force_series(p.x);
}

/// Low-temperature entropy slope: S ~ (k_B pi^3 R / 36)(k_B T / hbar c).
inline double pfa_entropy_low_T_slope(double R) { return si::k_B * pi * pi * pi * R / 36.0; }

inline double pfa_entropy_classical_limit(double ell, double R) { return si::k_B * R * zeta3 / (8.0 * ell); }

/// 2 pi R^2 int_0^1 (1 - t) e_par(ell + 2 R t) dt. The integrand is
/// concentrated in t < ell / R, so the interval is cut geometrically there.
inline double pfa_finite_R_integral(double ell, double R, double T, double tol = 1e-10) {
  if (!(ell > 0.0) || !(R > 0.0)) throw DomainError("pfa_finite_R_integral: ell and R must be > 0");
  using boost::math::quadrature::gauss_kronrod;
  auto f = [&](double t) { return (1.0 - t) * plate_energy_density(ell + 2.0 * R * t, T); };
  double total = 0.0;
  double err_total = 0.0;
  double a = 0.0;
  double b = std::min(1.0, ell / (2.0 * R));
  while (a < 1.0) {
    double err = 0.0;
    total += gauss_kronrod<double, 31>::integrate(f, a, b, 20, tol, &err);
    err_total += err;
    a = b;
    b = std::min(1.0, 10.0 * b);
  }
  if (!std::isfinite(total)) throw QuadratureFailure("pfa_finite_R_integral: non-finite result");
  return 2.0 * pi * R * R * total;
}

// Adimensional forms for a sphere pair with r = R/d at z = d / lambda_T
// (units of d; gap 1 - 2r, x = z (1 - 2r)), scaled like the asymptotic branch:
// e = 2 pi d^7 E / (hbar c R^6), s = d^6 S / (k_B R^6), f = 2 pi d^8 F / (hbar c R^6).

inline double pfa_e_ad(double r, double z) {
  const double g = 1.0 - 2.0 * r;
  const double r6 = std::pow(r, 6);
  if (z == 0.0) return -pi * pi * pi * pi * r / (720.0 * g * g * r6);
  return -(z * r / (4.0 * g * r6)) * pfa_energy_series(z * g);
}

inline double pfa_s_ad(double r, double z) {
  const double g = 1.0 - 2.0 * r;
  if (z == 0.0) return 0.0;
  return (r / (4.0 * g * std::pow(r, 6))) * pfa_entropy_series(z * g);
}

inline double pfa_f_ad(double r, double z) {
  const double g = 1.0 - 2.0 * r;
  const double r6 = std::pow(r, 6);
  if (z == 0.0) return -2.0 * pi * pi * pi * pi * r / (720.0 * g * g * g * r6);
  return -(z * r / (4.0 * g * g * r6)) * pfa_force_series(z * g);
}

}  // namespace casimir
