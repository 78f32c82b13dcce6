#pragma once

// Matsubara sum, zero-temperature integral and static (n = 0) term.
//
// Internally everything is in units of the centre distance: r = R/d,
// q = kappa d, z = d / lambda_T, and f(q) = log det(I - N) at kappa = q/d.
// Then
//   E(T) = k_B T sum'_n f(n z) = (hbar c / 2 pi d) eps(z),  eps(z) = z sum'_n f(n z),
//   E(0) = (hbar c / 2 pi d) int_0^inf f(q) dq,
// and the adimensional energy 2 pi d^7 E / (hbar c R^6) is eps(z) / r^6.

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "casimir/error.hpp"
#include "casimir/geometry.hpp"
#include "casimir/roundtrip.hpp"

namespace casimir {

enum class SumMethod { matsubara_sum, zero_T_quadrature };

struct FreeEnergyResult {
  double energy = 0.0;            ///< J when the geometry is in metres
  long n_terms_used = 0;
  std::vector<double> per_term;   ///< weighted terms k_B T w_n f(n z), same units
  double tail_bound = 0.0;        ///< bound on the neglected remainder (or quadrature error)
  SumMethod method = SumMethod::matsubara_sum;
  int l_max_used = 0;             ///< largest l_max over all evaluations
};

struct MatsubaraOptions {
  double tol = 1e-9;
  long n_ceiling = 1000000;
  RoundTripOptions roundtrip{};
};

struct StaticTermResult {
  double value = 0.0;
  double estimates[3] = {0.0, 0.0, 0.0};  ///< f at the three small q
  double q_start = 1e-3;
  int l_max_used = 0;
};

/// lim_{q -> 0} f(q) from f at q0, q0/2, q0/4, fitted to f0 + a q^2 + b q^3.
/// All three evaluations share the l_max chosen at q0 so that truncation
/// noise cannot masquerade as q dependence.
inline StaticTermResult static_term_adim(double r, const RoundTripOptions& opt = {}, double q0 = 1e-3) {
  StaticTermResult out;
  out.q_start = q0;
  const auto first = logdet_one_minus_n_adim(r, q0, opt);
  RoundTripOptions fixed = opt;
  fixed.l_max_fixed = first.l_max_used;
  out.l_max_used = first.l_max_used;
  out.estimates[0] = first.value;
  out.estimates[1] = logdet_one_minus_n_adim(r, q0 / 2, fixed).value;
  out.estimates[2] = logdet_one_minus_n_adim(r, q0 / 4, fixed).value;
  const double f1 = out.estimates[0];
  const double f2 = out.estimates[1];
  const double f3 = out.estimates[2];
  const double d1 = f1 - f2;
  const double d2 = f2 - f3;
  const double noise = 64.0 * std::numeric_limits<double>::epsilon() * std::abs(f3);
  if (std::abs(d1) <= noise && std::abs(d2) <= noise) {
    out.value = f3;
  } else {
    // q^2 alone gives d1/d2 = 4, q^3 alone gives 8.
    const double ratio = d1 / d2;
    if (!(ratio > 3.0 && ratio < 9.0)) {
      throw ExtrapolationUnstable("static_term: estimates not polynomial in q (difference ratio " +
                                  std::to_string(ratio) + ")");
    }
    // With h = q0/4: f(h) = f0 + a h^2 + b h^3, f(2h) = f0 + 4a h^2 + 8b h^3, f(4h) = f0 + 16a h^2 + 64b h^3.
    // Eliminating a and b: f0 = (32 f(h) - 12 f(2h) + f(4h)) / 21.
    out.value = (32.0 * f3 - 12.0 * f2 + f1) / 21.0;
  }
  if (!(out.value < 0.0)) {
    throw ExtrapolationUnstable("static_term: extrapolated value is not negative");
  }
  return out;
}

inline double static_term(const Geometry& g) { return static_term_adim(g.r()).value; }

/// f(q) = log det(I - N) at fixed r, with the static limit at q = 0.
class LogDetFunction {
 public:
  explicit LogDetFunction(double r, RoundTripOptions opt = {}) : r_(r), opt_(opt) {
    detail::require_ratio(r, "LogDetFunction");
  }

  double r() const { return r_; }
  const RoundTripOptions& options() const { return opt_; }

  /// For q > 0 the truncation tests get an absolute floor of 1e-3 tol |f(0)|:
  /// far-tail values only ever enter sums dominated by the static term.
  double operator()(double q) const {
    const double f0 = static_value();
    if (q <= 0.0) return f0;
    RoundTripOptions opt = opt_;
    opt.abs_tol = std::max(opt.abs_tol, 1e-3 * opt.tol * std::abs(f0));
    const auto res = logdet_one_minus_n_adim(r_, q, opt);
    note_l_max(res.l_max_used);
    return res.value;
  }

  double static_value() const {
    std::call_once(static_once_, [this] {
      const auto s = static_term_adim(r_, opt_);
      static_value_ = s.value;
      note_l_max(s.l_max_used);
    });
    return static_value_;
  }

  /// Rate of the e^{-gamma q} decay of f for large q.
  double decay_rate() const { return 2.0 * (1.0 - 2.0 * r_); }

  int max_l_used() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return max_l_;
  }

 private:
  void note_l_max(int l) const {
    std::lock_guard<std::mutex> lock(mutex_);
    max_l_ = std::max(max_l_, l);
  }

  double r_;
  RoundTripOptions opt_;
  mutable std::once_flag static_once_;
  mutable double static_value_ = 0.0;
  mutable std::mutex mutex_;
  mutable int max_l_ = 0;
};

/// Piecewise Chebyshev interpolant of f(q) on [0, q_max], built on first-kind
/// nodes (q = 0 itself is never evaluated). Pieces are bisected until the
/// trailing coefficients fall below abs_tol. Past q_max it defers to f.
class LogDetTable {
 public:
  struct Piece {
    double a, b;
    std::vector<double> c;  ///< Chebyshev coefficients
  };

  LogDetTable(std::shared_ptr<const LogDetFunction> f, double abs_tol, int degree = 20)
      : f_(std::move(f)), degree_(degree) {
    const double gamma = f_->decay_rate();
    q_max_ = 40.0 / gamma;
    const double w0 = 2.0 / gamma;
    // Widths double along the decay: [0, w0], [w0, 3w0], [3w0, 7w0], ...
    double a = 0.0;
    double w = w0;
    while (a < q_max_) {
      const double b = std::min(q_max_, a + w);
      build(a, b, abs_tol, 0);
      a = b;
      w *= 2.0;
    }
  }

  double q_max() const { return q_max_; }
  int node_count() const { return nodes_; }
  const std::vector<Piece>& pieces() const { return pieces_; }
  const LogDetFunction& function() const { return *f_; }

  double operator()(double q) const {
    if (q > q_max_) return (*f_)(q);
    const Piece& p = locate(q);
    const double t = (2.0 * q - p.a - p.b) / (p.b - p.a);
    // Clenshaw
    double b1 = 0.0;
    double b2 = 0.0;
    for (int k = static_cast<int>(p.c.size()) - 1; k >= 1; --k) {
      const double b0 = 2.0 * t * b1 - b2 + p.c[k];
      b2 = b1;
      b1 = b0;
    }
    return t * b1 - b2 + 0.5 * p.c[0];
  }

 private:
  const Piece& locate(double q) const {
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), q,
                               [](double v, const Piece& p) { return v < p.b; });
    if (it == pieces_.end()) return pieces_.back();
    return *it;
  }

  void build(double a, double b, double abs_tol, int depth) {
    const int n = degree_;
    std::vector<double> fx(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      const double theta = pi * (j + 0.5) / n;
      const double q = 0.5 * (a + b) + 0.5 * (b - a) * std::cos(theta);
      fx[j] = (*f_)(q);
    }
    nodes_ += n;
    Piece p{a, b, std::vector<double>(static_cast<std::size_t>(n))};
    for (int k = 0; k < n; ++k) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += fx[j] * std::cos(pi * k * (j + 0.5) / n);
      p.c[k] = 2.0 * s / n;
    }
    const double tail = std::abs(p.c[n - 1]) + std::abs(p.c[n - 2]) + std::abs(p.c[n - 3]);
    if (tail > abs_tol && depth < 12) {
      const double mid = 0.5 * (a + b);
      build(a, mid, abs_tol, depth + 1);
      build(mid, b, abs_tol, depth + 1);
      return;
    }
    pieces_.push_back(std::move(p));
  }

  std::shared_ptr<const LogDetFunction> f_;
  int degree_;
  double q_max_ = 0.0;
  int nodes_ = 0;
  std::vector<Piece> pieces_;
};

/// eps(z) = z sum'_n f(n z) with the static term given separately.
struct MatsubaraSum {
  double eps = 0.0;
  std::vector<double> per_term;  ///< z w_n f(n z)
  long n_terms = 0;
  double tail_bound = 0.0;
};

inline MatsubaraSum matsubara_sum(const std::function<double(double)>& f, double f0, double z, double tol,
                                  long n_ceiling = 1000000) {
  if (!(z > 0.0)) throw DomainError("matsubara_sum: z must be > 0");
  MatsubaraSum out;
  double sum = 0.5 * f0;
  out.per_term.push_back(z * 0.5 * f0);
  double prev = 0.5 * f0;
  long n = 1;
  for (;; ++n) {
    if (n > n_ceiling) {
      throw NonConvergence("matsubara_sum: more than " + std::to_string(n_ceiling) + " terms at z=" +
                           std::to_string(z));
    }
    const double t = f(n * z);
    sum += t;
    out.per_term.push_back(z * t);
    if (t == 0.0) {
      out.tail_bound = 0.0;
      break;
    }
    const double ratio = t / prev;
    prev = t;
    const double tail = (ratio > 0.0 && ratio < 1.0) ? std::abs(t) * ratio / (1.0 - ratio)
                                                     : std::numeric_limits<double>::infinity();
    if (std::abs(t) < tol * std::abs(sum) && tail < tol * std::abs(sum)) {
      out.tail_bound = z * tail;
      break;
    }
  }
  out.n_terms = n + 1;
  out.eps = z * sum;
  return out;
}

/// int_0^inf f(q) dq for f decaying like e^{-gamma q}: adaptive Gauss-Kronrod
/// on pieces of doubling width up to q = 40 / gamma; the rest is bounded by
/// |f(q_cut)| / gamma and goes into the error.
struct ZeroTIntegral {
  double value = 0.0;
  double error = 0.0;
};

inline ZeroTIntegral zero_T_integral(const std::function<double(double)>& f, double tol, double gamma) {
  using boost::math::quadrature::gauss_kronrod;
  if (!(gamma > 0.0)) throw DomainError("zero_T_integral: decay rate must be > 0");
  const double q_cut = 40.0 / gamma;
  ZeroTIntegral out;
  double a = 0.0;
  double w = 2.0 / gamma;
  while (a < q_cut) {
    const double b = std::min(q_cut, a + w);
    // Later pieces only need accuracy relative to the running total.
    double err = 0.0;
    double v = gauss_kronrod<double, 31>::integrate(f, a, b, 0, 0.0, &err);
    const double target = tol * std::abs(out.value + v);
    if (err > target) {
      const double rel = (out.value == 0.0 || v == 0.0) ? tol : std::min(1e-2, target / std::abs(v));
      v = gauss_kronrod<double, 31>::integrate(f, a, b, 15, rel, &err);
    }
    out.value += v;
    out.error += err;
    a = b;
    w *= 2.0;
  }
  out.error += std::abs(f(q_cut)) / gamma;
  if (!std::isfinite(out.value) || out.error > 1e3 * tol * std::abs(out.value)) {
    throw QuadratureFailure("zero_T_integral: error estimate " + std::to_string(out.error) +
                            " too large for value " + std::to_string(out.value));
  }
  return out;
}

inline FreeEnergyResult zero_T_energy(const Geometry& g, const MatsubaraOptions& opt) {
  LogDetFunction f(g.r(), opt.roundtrip);
  const auto integral = zero_T_integral([&](double q) { return f(q); }, opt.tol, f.decay_rate());
  const double unit = si::hbar_c / (2.0 * pi * g.d);
  FreeEnergyResult out;
  out.energy = unit * integral.value;
  out.tail_bound = unit * integral.error;
  out.method = SumMethod::zero_T_quadrature;
  out.l_max_used = f.max_l_used();
  return out;
}

inline FreeEnergyResult zero_T_energy(const Geometry& g, double tol) {
  MatsubaraOptions opt;
  opt.tol = tol;
  opt.roundtrip.tol = tol;
  return zero_T_energy(g, opt);
}

inline FreeEnergyResult free_energy(const Geometry& g, const ThermalPoint& th, const MatsubaraOptions& opt) {
  if (th.T <= 0.0 || th.z <= 0.0) return zero_T_energy(g, opt);
  LogDetFunction f(g.r(), opt.roundtrip);
  const double f0 = f.static_value();
  const auto sum = matsubara_sum([&](double q) { return f(q); }, f0, th.z, opt.tol, opt.n_ceiling);
  const double unit = si::hbar_c / (2.0 * pi * g.d);
  FreeEnergyResult out;
  out.energy = unit * sum.eps;
  out.n_terms_used = sum.n_terms;
  out.per_term.reserve(sum.per_term.size());
  for (double t : sum.per_term) out.per_term.push_back(unit * t);
  out.tail_bound = unit * sum.tail_bound;
  out.method = SumMethod::matsubara_sum;
  out.l_max_used = f.max_l_used();
  return out;
}

inline FreeEnergyResult free_energy(const Geometry& g, const ThermalPoint& th, double tol) {
  MatsubaraOptions opt;
  opt.tol = tol;
  opt.roundtrip.tol = tol;
  return free_energy(g, th, opt);
}

}  // namespace casimir
