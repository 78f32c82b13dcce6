#pragma once

// Li_2 and Li_3 on the real segment (0, 1], parameterised as Li_s(e^{-mu}).

#include <boost/math/special_functions/bernoulli.hpp>
#include <cmath>

#include "casimir/constants.hpp"
#include "casimir/error.hpp"

namespace casimir {

namespace detail {

inline constexpr double polylog_switch = 0.6931471805599453;  // ln 2

/// sum_k y^k / k^s, for y <= 1/2.
inline double polylog_direct(int s, double y) {
  double sum = 0.0;
  double power = y;
  for (int k = 1; k < 200; ++k) {
    const double term = power / std::pow(static_cast<double>(k), s);
    sum += term;
    if (term < 1e-18 * sum) break;
    power *= y;
  }
  return sum;
}

/// zeta(-n) for n >= 1, i.e. -B_{n+1}/(n+1) (zero for even n).
inline double zeta_negative_integer(int n) {
  if (n % 2 == 0) return 0.0;
  const double b = boost::math::unchecked_bernoulli_b2n<double>((n + 1) / 2);
  return -b / (n + 1);
}

}  // namespace detail

/// Li_3(e^{-mu}) for mu >= 0.
inline double polylog3_exp(double mu) {
  if (!(mu >= 0.0)) throw DomainError("polylog3_exp: mu must be >= 0");
  if (mu == 0.0) return zeta3;
  if (mu >= detail::polylog_switch) return detail::polylog_direct(3, std::exp(-mu));
  // Expansion about mu = 0, convergent for mu < 2 pi.
  double sum = zeta3 - zeta2 * mu + 0.5 * mu * mu * (1.5 - std::log(mu));
  double power = mu * mu;  // (-mu)^k / k! built incrementally from k = 2
  double fact = 2.0;
  for (int k = 3; k < 60; ++k) {
    power *= -mu;
    fact *= k;
    const double zeta = (k == 3) ? -0.5 : detail::zeta_negative_integer(k - 3);
    if (zeta == 0.0) continue;
    const double term = zeta * power / fact;
    sum += term;
    if (k > 6 && std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

/// Li_2(e^{-mu}) for mu >= 0.
inline double polylog2_exp(double mu) {
  if (!(mu >= 0.0)) throw DomainError("polylog2_exp: mu must be >= 0");
  if (mu == 0.0) return zeta2;
  if (mu >= detail::polylog_switch) return detail::polylog_direct(2, std::exp(-mu));
  double sum = zeta2 - mu * (1.0 - std::log(mu));
  double power = -mu;
  double fact = 1.0;
  for (int k = 2; k < 60; ++k) {
    power *= -mu;
    fact *= k;
    const double zeta = (k == 2) ? -0.5 : detail::zeta_negative_integer(k - 2);
    if (zeta == 0.0) continue;
    const double term = zeta * power / fact;
    sum += term;
    if (k > 5 && std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

}  // namespace casimir
