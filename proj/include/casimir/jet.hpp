#pragma once

// Second-order forward-mode dual numbers: value, first and second derivative
// with respect to one scalar variable.

#include <cmath>

namespace casimir {

struct Jet {
  double v = 0.0;
  double d = 0.0;
  double dd = 0.0;

  constexpr Jet() = default;
  constexpr Jet(double value) : v(value) {}  // NOLINT: implicit on purpose
  constexpr Jet(double value, double d1, double d2) : v(value), d(d1), dd(d2) {}

  static constexpr Jet variable(double x) { return {x, 1.0, 0.0}; }
};

constexpr Jet operator+(const Jet& a, const Jet& b) { return {a.v + b.v, a.d + b.d, a.dd + b.dd}; }
constexpr Jet operator-(const Jet& a, const Jet& b) { return {a.v - b.v, a.d - b.d, a.dd - b.dd}; }
constexpr Jet operator-(const Jet& a) { return {-a.v, -a.d, -a.dd}; }
constexpr Jet operator*(const Jet& a, const Jet& b) {
  return {a.v * b.v, a.d * b.v + a.v * b.d, a.dd * b.v + 2.0 * a.d * b.d + a.v * b.dd};
}
inline Jet reciprocal(const Jet& b) {
  const double i = 1.0 / b.v;
  return {i, -b.d * i * i, (2.0 * b.d * b.d * i - b.dd) * i * i};
}
inline Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

inline Jet& operator+=(Jet& a, const Jet& b) { return a = a + b; }
inline Jet& operator-=(Jet& a, const Jet& b) { return a = a - b; }
inline Jet& operator*=(Jet& a, const Jet& b) { return a = a * b; }

inline Jet exp(const Jet& a) {
  const double e = std::exp(a.v);
  return {e, e * a.d, e * (a.dd + a.d * a.d)};
}

inline double value_of(double x) { return x; }
inline double value_of(const Jet& x) { return x.v; }

}  // namespace casimir
