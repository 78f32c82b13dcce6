#pragma once

// Entropy and force of the full multiscattering energy by numerical
// differentiation, plus the negative-entropy scans.
//
// With d = 1 units, E = (hbar c / 2 pi d) eps(r, z), so
//   S = -k_B d eps / dz,          s_ad = -eps_z / r^6,
//   S_cl = -k_B f(0) / 2,         S / S_cl = 2 eps_z / f(0),
//   F = -dE/dd at fixed R, T:     f_ad = -(1/r^6) d/dδ [eps(r/(1+δ), z(1+δ)) / (1+δ)] at δ = 0.

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "casimir/asymptotics.hpp"
#include "casimir/constants.hpp"
#include "casimir/error.hpp"
#include "casimir/geometry.hpp"
#include "casimir/matsubara.hpp"
#include "casimir/pfa.hpp"

namespace casimir {

enum class Branch { numeric, asymptotic, pfa };

inline std::string to_string(Branch b) {
  switch (b) {
    case Branch::numeric: return "numeric";
    case Branch::asymptotic: return "asymptotic";
    case Branch::pfa: return "pfa";
  }
  return "unknown";
}

struct BranchChoice {
  Branch branch = Branch::numeric;
  std::string warning;  ///< non-empty when r sits near a branch boundary
};

/// Automatic branch: asymptotic for r <= 0.05, PFA for ell/R < 0.05, numeric otherwise.
inline BranchChoice select_branch(double r) {
  if (!(r > 0.0) || !(r < 0.5)) throw DomainError("select_branch: need 0 < r < 0.5");
  const double gap_over_R = (1.0 - 2.0 * r) / r;
  BranchChoice out;
  if (r <= 0.05) {
    out.branch = Branch::asymptotic;
    if (r > 0.04) out.warning = "r close to the asymptotic/numeric boundary 0.05";
  } else if (gap_over_R < 0.05) {
    out.branch = Branch::pfa;
    if (gap_over_R > 0.04) out.warning = "ell/R close to the pfa/numeric boundary 0.05";
  } else {
    out.branch = Branch::numeric;
    if (r < 0.06) out.warning = "r close to the asymptotic/numeric boundary 0.05";
    if (gap_over_R < 0.06) out.warning = "ell/R close to the pfa/numeric boundary 0.05";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Differentiation

struct Derivative {
  double value = 0.0;
  double error = 0.0;  ///< |Richardson value - finer central difference|
  double step = 0.0;   ///< coarse step h
};

/// Central differences at h and h/2 combined as (4 D(h/2) - D(h)) / 3.
template <class F>
Derivative central_richardson(F&& f, double x, double h) {
  const double d1 = (f(x + h) - f(x - h)) / (2.0 * h);
  const double h2 = 0.5 * h;
  const double d2 = (f(x + h2) - f(x - h2)) / (2.0 * h2);
  const double v = (4.0 * d2 - d1) / 3.0;
  return {v, std::abs(v - d2), h};
}

struct DiffStepPolicy {
  double rel_step_T = 1e-3;      ///< h_T = max(rel_step_T T, floor_T)
  double floor_T = 0.0;
  double rel_step_gap = 1e-2;    ///< h_d = rel_step_gap * ell
  double rel_step_force = 1e-3;  ///< δ for curve forces (plain central difference)
  bool richardson = true;
};

// ---------------------------------------------------------------------------
// Dimensional energy surface E(d, T) at fixed R for the numeric branch.

/// Caches one LogDetFunction per centre distance so that stencils in T reuse
/// the static term and coupling tables.
class EnergySurface {
 public:
  EnergySurface(double R, MatsubaraOptions opt) : R_(R), opt_(std::move(opt)) {}

  double operator()(double d, double T) const {
    (void)Geometry(R_, d);  // validates d > 2R
    const auto& f = function_for(d);
    if (T <= 0.0) {
      const auto integral = zero_T_integral([&](double q) { return f(q); }, opt_.tol, f.decay_rate());
      return si::hbar_c / (2.0 * pi * d) * integral.value;
    }
    const double z = ThermalPoint::from_temperature(T, d).z;
    const auto sum = matsubara_sum([&](double q) { return f(q); }, f.static_value(), z, opt_.tol, opt_.n_ceiling);
    return si::hbar_c / (2.0 * pi * d) * sum.eps;
  }

  int max_l_used() const {
    int l = 0;
    for (const auto& [d, f] : cache_) l = std::max(l, f->max_l_used());
    return l;
  }

 private:
  const LogDetFunction& function_for(double d) const {
    auto it = cache_.find(d);
    if (it == cache_.end()) {
      it = cache_.emplace(d, std::make_unique<LogDetFunction>(R_ / d, opt_.roundtrip)).first;
    }
    return *it->second;
  }

  double R_;
  MatsubaraOptions opt_;
  mutable std::map<double, std::unique_ptr<LogDetFunction>> cache_;
};

namespace detail {

inline MatsubaraOptions options_for(double tol) {
  MatsubaraOptions opt;
  opt.tol = tol;
  opt.roundtrip.tol = tol;
  return opt;
}

inline double temperature_step(double T, const DiffStepPolicy& p) {
  if (!(T > 0.0)) throw DomainError("entropy: T must be > 0");
  const double h = std::max(p.rel_step_T * T, p.floor_T);
  if (!(h < 0.5 * T) || T - h == T) {
    throw StepUnderflow("entropy: step " + std::to_string(h) + " unusable at T=" + std::to_string(T));
  }
  return h;
}

inline double gap_step(const Geometry& g, const DiffStepPolicy& p) {
  const double h = p.rel_step_gap * g.ell;
  if (!(h > 0.0) || g.d - h == g.d) throw StepUnderflow("force: gap step underflows");
  return h;
}

template <class F>
Derivative differentiate(F&& f, double x, double h, bool richardson) {
  if (richardson) return central_richardson(f, x, h);
  return {(f(x + h) - f(x - h)) / (2.0 * h), 0.0, h};
}

}  // namespace detail

/// S = -dE/dT in J/K at the given geometry (metres) and temperature.
inline Derivative entropy_numeric(const Geometry& g, const ThermalPoint& th, double tol = 1e-9,
                                  const DiffStepPolicy& policy = {}) {
  const double h = detail::temperature_step(th.T, policy);
  EnergySurface e(g.R, detail::options_for(tol));
  auto d = detail::differentiate([&](double T) { return e(g.d, T); }, th.T, h, policy.richardson);
  d.value = -d.value;
  return d;
}

/// F = -dE/dd in N at fixed R and T.
inline Derivative force_numeric(const Geometry& g, const ThermalPoint& th, double tol = 1e-9,
                                const DiffStepPolicy& policy = {}) {
  const double h = detail::gap_step(g, policy);
  EnergySurface e(g.R, detail::options_for(tol));
  auto d = detail::differentiate([&](double dd) { return e(dd, th.T); }, g.d, h, policy.richardson);
  d.value = -d.value;
  return d;
}

struct CrossDerivative {
  double lhs = 0.0;  ///< dF/dT
  double rhs = 0.0;  ///< dS/dd
  double relative_mismatch() const {
    const double scale = std::max(std::abs(lhs), std::abs(rhs));
    return scale == 0.0 ? 0.0 : std::abs(lhs - rhs) / scale;
  }
};

/// dF/dT against dS/dd from the numeric energy surface; both are -d^2E/dT dd.
inline CrossDerivative cross_derivative_check(const Geometry& g, const ThermalPoint& th, double tol = 1e-12,
                                              const DiffStepPolicy& policy = {}) {
  const double hT = detail::temperature_step(th.T, policy);
  const double hd = detail::gap_step(g, policy);
  EnergySurface e(g.R, detail::options_for(tol));
  auto force_at = [&](double T) {
    return -detail::differentiate([&](double d) { return e(d, T); }, g.d, hd, policy.richardson).value;
  };
  auto entropy_at = [&](double d) {
    return -detail::differentiate([&](double T) { return e(d, T); }, th.T, hT, policy.richardson).value;
  };
  CrossDerivative out;
  out.lhs = detail::differentiate(force_at, th.T, hT, policy.richardson).value;
  out.rhs = detail::differentiate(entropy_at, g.d, hd, policy.richardson).value;
  return out;
}

/// The same identity on the dipole closed forms, in units k_B R^6 / d^7 with d = 1:
/// lhs from finite differences of F(T), rhs from finite differences of S(d).
inline CrossDerivative cross_derivative_check_asymptotic(double z, double rel_step = 1e-2) {
  // dF/dT at fixed d is (z/T) df/dz, and hbar c z / (2 pi d^8 T) = k_B / d^7,
  // so both sides are in units of k_B R^6 / d^7. lhs from jets, rhs by
  // differences with two Richardson levels (error O(h^6)).
  CrossDerivative out;
  out.lhs = f_ad_slope(z);
  auto s_of_d = [&](double d) { return s_ad(z * d) / std::pow(d, 6); };
  const double h = rel_step;
  const double r1 = central_richardson(s_of_d, 1.0, h).value;
  const double r2 = central_richardson(s_of_d, 1.0, 0.5 * h).value;
  out.rhs = (16.0 * r2 - r1) / 15.0;
  return out;
}

// ---------------------------------------------------------------------------
// Adimensional curves at fixed r

/// eps(z) = z sum'_n f(n z) at fixed r from a Chebyshev table of f. Terms with
/// n z > q_max are below e^{-40} |f(0)| and are dropped, which keeps eps
/// smooth in z for finite differencing.
class TabulatedEpsilon {
 public:
  TabulatedEpsilon(double r, double tol = 1e-9) {
    RoundTripOptions opt;
    opt.tol = tol;
    auto f = std::make_shared<const LogDetFunction>(r, opt);
    f0_ = f->static_value();
    table_ = std::make_unique<LogDetTable>(f, 1e-3 * tol * std::abs(f0_));
  }

  double r() const { return table_->function().r(); }
  double static_value() const { return f0_; }
  const LogDetTable& table() const { return *table_; }

  double operator()(double z) const {
    if (!(z > 0.0)) throw DomainError("TabulatedEpsilon: z must be > 0");
    const double q_max = table_->q_max();
    double sum = 0.0;
    // Smallest terms first.
    const long n_max = static_cast<long>(std::floor(q_max / z));
    for (long n = n_max; n >= 1; --n) sum += (*table_)(n * z);
    return z * (0.5 * f0_ + sum);
  }

  /// eps at T = 0, the q-integral of the tabulated f.
  double zero_T(double tol) const {
    return zero_T_integral([this](double q) { return (*table_)(q); }, tol, table_->function().decay_rate()).value;
  }

 private:
  double f0_ = 0.0;
  std::unique_ptr<LogDetTable> table_;
};

struct ThermoSample {
  double z = 0.0;
  double e_ad = 0.0;
  double s_ad = 0.0;
  double f_ad = 0.0;
  double s_over_scl = 0.0;  ///< S divided by the branch's own classical limit
  double err_est = 0.0;     ///< Richardson error estimate on s_ad
};

struct ThermoCurve {
  double r = 0.0;
  std::vector<ThermoSample> samples;
  Branch method = Branch::numeric;
  DiffStepPolicy diff_step_policy;
  int l_max = 0;
  double s_classical = 0.0;  ///< s_ad of the classical limit used for s_over_scl
};

/// Log-spaced grid of n points on [z_min, z_max].
struct ZGrid {
  double z_min = 0.05;
  double z_max = 20.0;
  int points = 200;

  std::vector<double> values() const {
    if (!(z_min > 0.0) || !(z_max > z_min) || points < 2) throw DomainError("ZGrid: need 0 < z_min < z_max, points >= 2");
    std::vector<double> z(static_cast<std::size_t>(points));
    const double a = std::log(z_min);
    const double b = std::log(z_max);
    for (int i = 0; i < points; ++i) z[i] = std::exp(a + (b - a) * i / (points - 1));
    z.front() = z_min;
    z.back() = z_max;
    return z;
  }
};

/// Classical-limit entropy per branch, in s_ad units.
inline double classical_s_ad(Branch b, double r, double f0 = 0.0) {
  switch (b) {
    case Branch::asymptotic: return 3.75;
    case Branch::pfa: return r * zeta3 / (8.0 * (1.0 - 2.0 * r) * std::pow(r, 6));
    case Branch::numeric: return -0.5 * f0 / std::pow(r, 6);
  }
  return 0.0;
}

/// Entropy-only evaluator s_ad(z) with its Richardson error for one branch.
class EntropyCurve {
 public:
  EntropyCurve(Branch b, double r, double tol = 1e-9, DiffStepPolicy policy = {})
      : branch_(b), r_(r), tol_(tol), policy_(policy) {
    if (!(r > 0.0) || !(r < 0.5)) throw DomainError("EntropyCurve: need 0 < r < 0.5");
    if (b == Branch::numeric) eps_ = std::make_shared<TabulatedEpsilon>(r, tol);
    s_cl_ = classical_s_ad(b, r, eps_ ? eps_->static_value() : 0.0);
  }

  Branch branch() const { return branch_; }
  double r() const { return r_; }
  double s_classical() const { return s_cl_; }
  const DiffStepPolicy& policy() const { return policy_; }
  std::shared_ptr<const TabulatedEpsilon> epsilon() const { return eps_; }

  Derivative s(double z) const {
    switch (branch_) {
      case Branch::asymptotic: return {s_ad(z), 0.0, 0.0};
      case Branch::pfa: return {pfa_s_ad(r_, z), 0.0, 0.0};
      case Branch::numeric: break;
    }
    if (z == 0.0) return {0.0, 0.0, 0.0};
    const double h = std::max(policy_.rel_step_T * z, policy_.floor_T);
    if (!(h < 0.5 * z)) throw StepUnderflow("entropy: step too large for z=" + std::to_string(z));
    const double r6 = std::pow(r_, 6);
    auto d = detail::differentiate([&](double zz) { return (*eps_)(zz); }, z, h, policy_.richardson);
    return {-d.value / r6, d.error / r6, h};
  }

  double ratio(double z) const { return s(z).value / s_cl_; }

  /// Smallest |S/S_cl| whose sign is trusted: 1e3 tol for the numeric branch.
  double resolution() const { return branch_ == Branch::numeric ? 1e3 * tol_ : 1e-14; }

 private:
  Branch branch_;
  double r_;
  double tol_;
  DiffStepPolicy policy_;
  std::shared_ptr<const TabulatedEpsilon> eps_;
  double s_cl_ = 0.0;
};

namespace detail {

/// Runs body(i) for i in [0, n) on up to `jobs` threads, interleaved by index.
template <class Body>
void parallel_for(std::size_t n, int jobs, Body&& body) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, jobs)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace detail

/// Energy, entropy and force on a grid. For the numeric branch the force uses
/// two extra tables at r / (1 +- δ). Rows are filled in grid order whatever `jobs` is.
inline ThermoCurve thermo_curve(const EntropyCurve& ent, const std::vector<double>& zs, double tol = 1e-9,
                                bool with_force = true, int jobs = 1) {
  for (std::size_t i = 1; i < zs.size(); ++i) {
    if (!(zs[i] > zs[i - 1])) throw DomainError("thermo_curve: z grid must be strictly increasing");
  }
  for (double z : zs) {
    if (!(z >= 0.0) || !std::isfinite(z)) throw DomainError("thermo_curve: z must be finite and >= 0");
  }
  const Branch b = ent.branch();
  const double r = ent.r();
  const DiffStepPolicy& policy = ent.policy();
  ThermoCurve out;
  out.r = r;
  out.method = b;
  out.diff_step_policy = policy;
  out.s_classical = ent.s_classical();
  const double r6 = std::pow(r, 6);
  std::unique_ptr<TabulatedEpsilon> up;
  std::unique_ptr<TabulatedEpsilon> dn;
  const double delta = policy.rel_step_force;
  if (b == Branch::numeric && with_force) {
    up = std::make_unique<TabulatedEpsilon>(r / (1.0 + delta), tol);
    dn = std::make_unique<TabulatedEpsilon>(r / (1.0 - delta), tol);
  }
  auto eps_at = [tol](const TabulatedEpsilon& e, double z) { return z > 0.0 ? e(z) : e.zero_T(tol); };
  out.samples.resize(zs.size());
  detail::parallel_for(zs.size(), jobs, [&](std::size_t i) {
    const double z = zs[i];
    ThermoSample s;
    s.z = z;
    const auto sd = ent.s(z);
    s.s_ad = sd.value;
    s.err_est = sd.error;
    s.s_over_scl = sd.value / ent.s_classical();
    switch (b) {
      case Branch::asymptotic:
        s.e_ad = e_ad(z);
        s.f_ad = f_ad(z);
        break;
      case Branch::pfa:
        s.e_ad = pfa_e_ad(r, z);
        s.f_ad = pfa_f_ad(r, z);
        break;
      case Branch::numeric: {
        s.e_ad = eps_at(*ent.epsilon(), z) / r6;
        if (with_force) {
          const double gp = eps_at(*up, z * (1.0 + delta)) / (1.0 + delta);
          const double gm = eps_at(*dn, z * (1.0 - delta)) / (1.0 - delta);
          s.f_ad = -(gp - gm) / (2.0 * delta) / r6;
        } else {
          s.f_ad = std::numeric_limits<double>::quiet_NaN();
        }
        break;
      }
    }
    out.samples[i] = s;
  });
  if (b == Branch::numeric) {
    out.l_max = ent.epsilon()->table().function().max_l_used();
    if (up) out.l_max = std::max({out.l_max, up->table().function().max_l_used(), dn->table().function().max_l_used()});
  }
  return out;
}

inline ThermoCurve thermo_curve(Branch b, double r, const std::vector<double>& zs, double tol = 1e-9,
                                bool with_force = true, DiffStepPolicy policy = {}, int jobs = 1) {
  return thermo_curve(EntropyCurve(b, r, tol, policy), zs, tol, with_force, jobs);
}

// ---------------------------------------------------------------------------
// Negative-entropy features

struct EntropyFeatureReport {
  double r = 0.0;
  Branch branch = Branch::numeric;
  bool has_negative_interval = false;
  std::optional<std::pair<double, double>> interval;
  double min_S_over_Scl = 0.0;       ///< smallest S/S_cl past the first local maximum
  double z_at_min = 0.0;
  double low_T_exponent = std::numeric_limits<double>::quiet_NaN();
  std::pair<double, double> fit_window{0.0, 0.0};
  std::vector<double> z;
  std::vector<double> s_over_scl;
};

namespace detail {

/// Least-squares slope and RMS residual of y against x.
inline std::pair<double, double> linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double slope = sxy / sxx;
  double res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (my + slope * (x[i] - mx));
    res += e * e;
  }
  return {slope, std::sqrt(res / n)};
}

}  // namespace detail

/// Slope of log|S| against log z over the one-decade window with the smallest
/// fit residual, among windows lying below z_cut. Returns NaN if nothing fits.
inline std::pair<double, std::pair<double, double>> fit_low_T_exponent(const std::vector<double>& z,
                                                                       const std::vector<double>& s,
                                                                       double z_cut) {
  double best_res = std::numeric_limits<double>::infinity();
  double best_slope = std::numeric_limits<double>::quiet_NaN();
  std::pair<double, double> window{0.0, 0.0};
  for (std::size_t i = 0; i < z.size(); ++i) {
    std::vector<double> lx, ly;
    std::size_t j = i;
    for (; j < z.size() && z[j] <= 10.0 * z[i] * (1.0 + 1e-12) && z[j] <= z_cut; ++j) {
      if (s[j] == 0.0) break;
      lx.push_back(std::log(z[j]));
      ly.push_back(std::log(std::abs(s[j])));
    }
    if (lx.size() < 5 || z[j - 1] < 9.0 * z[i]) continue;
    const auto [slope, res] = detail::linear_fit(lx, ly);
    if (res < best_res) {
      best_res = res;
      best_slope = slope;
      window = {z[i], z[j - 1]};
    }
  }
  if (std::isnan(best_slope)) {
    // No full decade available: fall back to everything below z_cut if it spans a factor 3.
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < z.size() && z[i] <= z_cut; ++i) {
      if (s[i] == 0.0) continue;
      lx.push_back(std::log(z[i]));
      ly.push_back(std::log(std::abs(s[i])));
    }
    if (lx.size() >= 5 && lx.back() - lx.front() >= std::log(3.0)) {
      best_slope = detail::linear_fit(lx, ly).first;
      window = {std::exp(lx.front()), std::exp(lx.back())};
    }
  }
  return {best_slope, window};
}

/// S/S_cl on a log grid; the negative interval is refined by bisection to 1e-3 in z.
/// Points whose |S/S_cl| is below the curve's resolution are treated as unknown
/// sign: they take part neither in the sign structure nor in the exponent fit.
inline EntropyFeatureReport scan_entropy_features(const EntropyCurve& curve, const std::vector<double>& zs) {
  EntropyFeatureReport rep;
  rep.r = curve.r();
  rep.branch = curve.branch();
  rep.z = zs;
  const auto n = rep.z.size();
  for (std::size_t i = 1; i < n; ++i) {
    if (!(rep.z[i] > rep.z[i - 1])) throw DomainError("scan_entropy_features: z grid must be strictly increasing");
  }
  rep.s_over_scl.resize(n);
  std::vector<double> s(n);
  std::vector<std::size_t> idx;  // resolved points
  for (std::size_t i = 0; i < n; ++i) {
    const auto d = curve.s(rep.z[i]);
    s[i] = d.value;
    rep.s_over_scl[i] = d.value / curve.s_classical();
    const double noise = std::max(curve.resolution(), 100.0 * d.error / std::abs(curve.s_classical()));
    if (std::abs(rep.s_over_scl[i]) > noise) idx.push_back(i);
  }
  if (idx.size() < 3) throw GridTooCoarse("scan_entropy_features: fewer than 3 resolved points");
  const auto& ratio = rep.s_over_scl;
  const std::size_t m = idx.size();

  // First local maximum separates the low-T rise from the dip.
  std::size_t peak = 0;
  bool has_peak = false;
  for (std::size_t k = 1; k + 1 < m; ++k) {
    if (ratio[idx[k]] > ratio[idx[k - 1]] && ratio[idx[k]] >= ratio[idx[k + 1]]) {
      peak = k;
      has_peak = true;
      break;
    }
  }
  std::size_t kmin = peak;
  for (std::size_t k = peak; k < m; ++k) {
    if (ratio[idx[k]] < ratio[idx[kmin]]) kmin = k;
  }
  rep.min_S_over_Scl = ratio[idx[kmin]];
  rep.z_at_min = rep.z[idx[kmin]];
  if (has_peak && kmin > peak && kmin + 1 < m) {
    const auto br = boost::math::tools::brent_find_minima([&](double zz) { return curve.ratio(zz); },
                                                          rep.z[idx[kmin - 1]], rep.z[idx[kmin + 1]], 40);
    if (br.second < rep.min_S_over_Scl) {
      rep.min_S_over_Scl = br.second;
      rep.z_at_min = br.first;
    }
  }

  auto refine = [&](double a, double b) {
    double fa = curve.ratio(a);
    while (b - a > 1e-3) {
      const double mid = 0.5 * (a + b);
      const double fm = curve.ratio(mid);
      if ((fm < 0.0) == (fa < 0.0)) {
        a = mid;
        fa = fm;
      } else {
        b = mid;
      }
    }
    return 0.5 * (a + b);
  };

  // Negative runs among resolved points.
  std::vector<std::pair<std::size_t, std::size_t>> runs;
  for (std::size_t k = 0; k < m; ++k) {
    if (ratio[idx[k]] < 0.0) {
      std::size_t j = k;
      while (j + 1 < m && ratio[idx[j + 1]] < 0.0) ++j;
      runs.emplace_back(k, j);
      k = j;
    }
  }
  if (runs.size() > 1) {
    throw GridTooCoarse("scan_entropy_features: " + std::to_string(runs.size()) + " separate negative runs at r=" +
                        std::to_string(rep.r));
  }
  if (runs.size() == 1) {
    const auto [k, j] = runs.front();
    if (k == 0 || j + 1 == m) {
      throw GridTooCoarse("scan_entropy_features: negative run touches the grid edge at r=" + std::to_string(rep.r));
    }
    rep.interval = std::make_pair(refine(rep.z[idx[k - 1]], rep.z[idx[k]]), refine(rep.z[idx[j]], rep.z[idx[j + 1]]));
    rep.has_negative_interval = true;
    for (std::size_t q = k; q <= j; ++q) rep.min_S_over_Scl = std::min(rep.min_S_over_Scl, ratio[idx[q]]);
  } else if (rep.min_S_over_Scl < 0.0) {
    // The dip dives below zero only between two grid points.
    rep.interval = std::make_pair(refine(rep.z[idx[kmin - 1]], rep.z_at_min), refine(rep.z_at_min, rep.z[idx[kmin + 1]]));
    rep.has_negative_interval = true;
  }

  // Exponent: resolved points before the first local maximum, sign change or S/S_cl = 0.05.
  std::vector<double> fz, fs;
  for (std::size_t k = 0; k < m; ++k) {
    const double v = ratio[idx[k]];
    if (v <= 0.0 || v >= 0.05 || (has_peak && k > peak)) break;
    fz.push_back(rep.z[idx[k]]);
    fs.push_back(s[idx[k]]);
  }
  const auto fit = fit_low_T_exponent(fz, fs, std::numeric_limits<double>::infinity());
  rep.low_T_exponent = fit.first;
  rep.fit_window = fit.second;
  return rep;
}

inline EntropyFeatureReport scan_entropy_features(const EntropyCurve& curve, const ZGrid& grid) {
  return scan_entropy_features(curve, grid.values());
}

inline EntropyFeatureReport scan_entropy_features(double r, const ZGrid& grid = {}, double tol = 1e-9,
                                                  Branch branch = Branch::numeric) {
  return scan_entropy_features(EntropyCurve(branch, r, tol), grid);
}

struct ThresholdResult {
  double r_star = 0.0;
  double r_lo = 0.0;  ///< final bracket, feature present
  double r_hi = 0.0;  ///< final bracket, feature absent
  std::vector<std::pair<double, double>> history;  ///< (r, min S/S_cl) per evaluation
};

/// Bisection in r on the presence of a negative-entropy interval.
inline ThresholdResult find_disappearance_threshold(double r_lo, double r_hi, double tol_r, const ZGrid& grid = {},
                                                    double tol = 1e-9) {
  ThresholdResult out;
  auto has = [&](double r) {
    const auto rep = scan_entropy_features(r, grid, tol);
    out.history.emplace_back(r, rep.min_S_over_Scl);
    return rep.has_negative_interval;
  };
  if (!has(r_lo)) throw BracketingFailure("find_disappearance_threshold: no negative interval at r_lo");
  if (has(r_hi)) throw BracketingFailure("find_disappearance_threshold: negative interval persists at r_hi");
  while (r_hi - r_lo > tol_r) {
    const double m = 0.5 * (r_lo + r_hi);
    if (has(m)) {
      r_lo = m;
    } else {
      r_hi = m;
    }
  }
  out.r_lo = r_lo;
  out.r_hi = r_hi;
  out.r_star = 0.5 * (r_lo + r_hi);
  return out;
}

}  // namespace casimir
