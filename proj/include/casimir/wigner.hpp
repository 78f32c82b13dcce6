#pragma once

// Wigner 3j symbols (j1 j2 j; m1 m2 m3) for all allowed j at once.
//
// Three-term recursion in j (Schulten and Gordon). The recursion is run
// upward through the lower non-classical region and the oscillatory region,
// and downward through the upper non-classical region, so that each pass
// only ever follows a growing solution. The two pieces are matched at the
// upper turning point and normalised by sum_j (2j+1) f(j)^2 = 1.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "casimir/error.hpp"

namespace casimir {

/// 3j symbols indexed by j - j_min for j = j_min..j_max.
struct Wigner3jFamily {
  int j_min = 0;
  int j_max = -1;
  std::vector<double> values;

  double operator()(int j) const {
    if (j < j_min || j > j_max) return 0.0;
    return values[static_cast<std::size_t>(j - j_min)];
  }
};

namespace detail {

inline double w3j_a(int j, int j1, int j2, int m3) {
  const double jj = static_cast<double>(j) * j;
  const double a = jj - static_cast<double>(j1 - j2) * (j1 - j2);
  const double b = static_cast<double>(j1 + j2 + 1) * (j1 + j2 + 1) - jj;
  const double c = jj - static_cast<double>(m3) * m3;
  const double p = a * b * c;
  return p > 0.0 ? std::sqrt(p) : 0.0;
}

inline double w3j_b(int j, int j1, int j2, int m1, int m2, int m3) {
  const double jd = j;
  return -(2.0 * jd + 1.0) * (static_cast<double>(j1) * (j1 + 1) * m3 -
                              static_cast<double>(j2) * (j2 + 1) * m3 -
                              jd * (jd + 1.0) * (m2 - m1));
}

}  // namespace detail

/// (j1 j2 j; m1 m2 -(m1+m2)) for every j. Integer arguments only.
inline Wigner3jFamily wigner3j_family(int j1, int j2, int m1, int m2) {
  const int m3 = -(m1 + m2);
  Wigner3jFamily out;
  if (j1 < 0 || j2 < 0 || std::abs(m1) > j1 || std::abs(m2) > j2) return out;
  out.j_min = std::max(std::abs(j1 - j2), std::abs(m3));
  out.j_max = j1 + j2;
  if (out.j_min > out.j_max) return out;
  const int n = out.j_max - out.j_min + 1;
  auto& f = out.values;
  f.assign(static_cast<std::size_t>(n), 0.0);
  if (n == 1) {
    f[0] = 1.0;
  } else {
    const int jmin = out.j_min;
    const int jmax = out.j_max;
    // Coefficients of  x(j) f(j+1) + y(j) f(j) + z(j) f(j-1) = 0.
    auto x = [&](int j) { return j * detail::w3j_a(j + 1, j1, j2, m3); };
    auto y = [&](int j) { return detail::w3j_b(j, j1, j2, m1, m2, m3); };
    auto z = [&](int j) { return (j + 1) * detail::w3j_a(j, j1, j2, m3); };

    // Upper turning point: first j above which the local characteristic
    // roots stay real (non-oscillatory) up to j_max.
    int j_turn = jmax;
    for (int j = jmax - 1; j > jmin; --j) {
      const double yy = y(j);
      if (yy * yy < 4.0 * x(j) * z(j)) break;
      j_turn = j;
    }

    constexpr double big = 1e200;
    // Upward pass from j_min to j_turn.
    f[0] = 1.0;
    if (jmin == 0) {
      // Only reachable with j1 == j2 and m3 == 0; x(0) vanishes.
      // (j j 1; m -m 0) / (j j 0; m -m 0) = m / sqrt(j(j+1))
      f[1] = static_cast<double>(m1) / std::sqrt(static_cast<double>(j1) * (j1 + 1));
    } else {
      f[1] = -y(jmin) / x(jmin);
    }
    for (int j = jmin + 1; j < j_turn; ++j) {
      const int k = j - jmin;
      f[k + 1] = -(y(j) * f[k] + z(j) * f[k - 1]) / x(j);
      if (std::abs(f[k + 1]) > big) {
        for (int i = 0; i <= k + 1; ++i) f[i] /= big;
      }
    }

    if (j_turn < jmax) {
      // Downward pass from j_max to j_turn, then rescale onto the upward pass.
      std::vector<double> g(static_cast<std::size_t>(jmax - j_turn + 1));
      const int top = jmax - j_turn;
      g[top] = 1.0;
      g[top - 1] = -y(jmax) / z(jmax);
      for (int j = jmax - 1; j > j_turn; --j) {
        const int k = j - j_turn;
        g[k - 1] = -(x(j) * g[k + 1] + y(j) * g[k]) / z(j);
        if (std::abs(g[k - 1]) > big) {
          for (int i = k - 1; i <= top; ++i) g[i] /= big;
        }
      }
      const int kt = j_turn - jmin;
      // Least-squares match on j_turn and j_turn - 1 (guards against a node).
      const double g_below = -(x(j_turn) * g[1] + y(j_turn) * g[0]) / z(j_turn);
      const double scale = (f[kt] * g[0] + f[kt - 1] * g_below) / (g[0] * g[0] + g_below * g_below);
      for (int i = 0; i <= top; ++i) f[kt + i] = scale * g[i];
    }
  }

  double peak = 0.0;
  for (double v : f) peak = std::max(peak, std::abs(v));
  for (auto& v : f) v /= peak;
  double norm = 0.0;
  for (int k = 0; k < n; ++k) {
    norm += (2.0 * (out.j_min + k) + 1.0) * f[k] * f[k];
  }
  double inv = 1.0 / std::sqrt(norm);
  const int sign_exp = j1 - j2 - m3;
  const double want = (sign_exp % 2 == 0) ? 1.0 : -1.0;
  if ((f[n - 1] < 0.0 ? -1.0 : 1.0) != want) inv = -inv;
  for (auto& v : f) v *= inv;
  return out;
}

/// Single 3j symbol; zero when selection rules fail.
inline double wigner3j(int j1, int j2, int j3, int m1, int m2, int m3) {
  if (m1 + m2 + m3 != 0) return 0.0;
  if (j3 < std::abs(j1 - j2) || j3 > j1 + j2 || std::abs(m3) > j3) return 0.0;
  return wigner3j_family(j1, j2, m1, m2)(j3);
}

}  // namespace casimir
