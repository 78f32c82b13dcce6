#pragma once

// Acceptance criteria, shared by the acceptance test binary and the
// `validate` subcommand. Each check returns one line: PASS or FAIL, what was
// measured, and the wall time against its budget.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "casimir/casimir.hpp"

namespace casimir::acceptance {

struct Outcome {
  int id = 0;
  std::string title;
  bool pass = false;
  bool skipped = false;
  std::string detail;
  double seconds = 0.0;
  double budget = 0.0;

  std::string line() const {
    std::ostringstream os;
    os << (skipped ? "SKIP" : (pass ? "PASS" : "FAIL")) << " criterion " << id << ": " << title;
    if (!detail.empty()) os << " | " << detail;
    os.precision(3);
    os << " | " << std::fixed << seconds << " s (budget " << budget << " s)";
    return os.str();
  }
};

struct Check {
  int id;
  std::string title;
  double budget;
  bool slow;
  std::function<bool(std::string&)> run;
};

namespace detail {

inline std::string fmt(double v, int prec = 10) {
  std::ostringstream os;
  os.precision(prec);
  os << v;
  return os.str();
}

struct GoldenRow {
  std::vector<double> cols;
};

/// Whitespace-separated numeric rows; '#' starts a comment line.
inline std::vector<GoldenRow> read_golden(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open golden file " + path);
  std::vector<GoldenRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream is(line);
    GoldenRow row;
    std::string tok;
    while (is >> tok) row.cols.push_back(std::stod(tok));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace detail

inline std::vector<Check> checks(const std::string& testdata_dir) {
  using detail::fmt;
  std::vector<Check> out;

  out.push_back({1, "zero-T large-separation coefficient -143/(16 pi)", 30.0, false, [](std::string& msg) {
                   const double r = 0.01;
                   const auto g = Geometry::from_ratio(r);
                   const auto res = zero_T_energy(g, 1e-9);
                   const double ratio = res.energy * 16.0 * pi * std::pow(g.d, 7) / (143.0 * si::hbar_c * std::pow(g.R, 6));
                   msg = "E0 * 16 pi d^7 / (143 hbar c R^6) = " + fmt(ratio);
                   return ratio >= -1.01 && ratio <= -0.99;
                 }});

  out.push_back({2, "classical coefficient -15 k_B T R^6 / (4 d^6)", 10.0, false, [](std::string& msg) {
                   const auto g = Geometry::from_ratio(0.01);
                   const auto th = ThermalPoint::from_z(50.0, g.d);
                   const auto res = free_energy(g, th, 1e-9);
                   const double cl = -15.0 * si::k_B * th.T * std::pow(g.R, 6) / (4.0 * std::pow(g.d, 6));
                   const double ratio = res.energy / cl;
                   msg = "E / E_cl = " + fmt(ratio);
                   return ratio >= 0.99 && ratio <= 1.01;
                 }});

  out.push_back({3, "local maximum of E/E0 near z = 1.0388, height ~1e-4", 1.0, false, [](std::string& msg) {
                   const auto [z, h] = find_e_ratio_max();
                   msg = "z* = " + fmt(z) + ", E/E0 - 1 = " + fmt(h, 6);
                   return std::abs(z - 1.0388) <= 1e-3 && h >= 1e-4 / 1.2 && h <= 1.2e-4;
                 }});

  out.push_back({4, "asymptotic entropy: two positive zeros, negative only between them", 1.0, false,
                 [](std::string& msg) {
                   const auto zeros = entropy_zeros_in(1e-3, 50.0, 5000);
                   if (zeros.size() != 2) {
                     msg = "found " + std::to_string(zeros.size()) + " zeros";
                     return false;
                   }
                   int bad = 0;
                   const int n = 20000;
                   for (int i = 0; i <= n; ++i) {
                     const double z = 1e-3 * std::pow(5e4, static_cast<double>(i) / n);
                     if (std::abs(z - zeros[0]) < 1e-9 || std::abs(z - zeros[1]) < 1e-9) continue;
                     const double s = s_ad(z);
                     const bool inside = z > zeros[0] && z < zeros[1];
                     if (inside ? !(s < 0.0) : !(s >= 0.0)) ++bad;
                   }
                   msg = "zeros " + fmt(zeros[0]) + ", " + fmt(zeros[1]) + "; sign violations " + std::to_string(bad);
                   return bad == 0;
                 }});

  out.push_back({5, "negative entropy present at r = 0.40, absent at r = 0.41 (slow)", 1800.0, true,
                 [](std::string& msg) {
                   const ZGrid grid{0.05, 20.0, 200};
                   const auto a = scan_entropy_features(0.40, grid, 1e-9);
                   const auto b = scan_entropy_features(0.41, grid, 1e-9);
                   msg = "r=0.40: " + std::string(a.has_negative_interval ? "negative" : "none");
                   if (a.interval) msg += " on [" + fmt(a.interval->first, 5) + ", " + fmt(a.interval->second, 5) + "]";
                   msg += ", min S/S_cl " + fmt(a.min_S_over_Scl, 4) + "; r=0.41: " +
                          (b.has_negative_interval ? "negative" : "none") + ", min S/S_cl " + fmt(b.min_S_over_Scl, 4);
                   return a.has_negative_interval && !b.has_negative_interval;
                 }});

  out.push_back({6, "PFA energy limits at x = 1e-4 and x = 50", 1.0, false, [](std::string& msg) {
                   const double R = 1e-6;
                   const double ell = 1e-8;
                   auto at_x = [&](double x) {
                     const double T = x * si::hbar_c / (2.0 * pi * si::k_B * ell);
                     auto p = PfaPoint::make(ell, R, T);
                     p.x = x;
                     return p;
                   };
                   const auto lo = at_x(1e-4);
                   const auto hi = at_x(50.0);
                   const double e_lo = detail::rel(pfa_energy_sum(lo), pfa_quantum_limit(ell, R));
                   const double e_hi = detail::rel(pfa_energy_sum(hi), pfa_classical_limit(ell, R, hi.T));
                   msg = "rel. deviation " + fmt(e_lo, 3) + " (quantum), " + fmt(e_hi, 3) + " (classical)";
                   return e_lo <= 1e-6 && e_hi <= 1e-10;
                 }});

  out.push_back({7, "PFA entropy non-negative; low-x slope k_B pi^3 R / 36", 1.0, false, [](std::string& msg) {
                   const double R = 1e-6;
                   const double ell = 1e-8;
                   int negative = 0;
                   const int n = 1000;
                   for (int i = 0; i < n; ++i) {
                     const double x = 1e-3 * std::pow(1e5, static_cast<double>(i) / (n - 1));
                     if (pfa_entropy_series(x) < 0.0) ++negative;
                   }
                   const double x = 1e-4;
                   const double T = x * si::hbar_c / (2.0 * pi * si::k_B * ell);
                   auto p = PfaPoint::make(ell, R, T);
                   p.x = x;
                   const double slope = pfa_entropy(p) / (si::k_B * T / si::hbar_c);
                   const double dev = detail::rel(slope, pfa_entropy_low_T_slope(R));
                   msg = std::to_string(negative) + " negative samples; slope rel. deviation " + fmt(dev, 3);
                   return negative == 0 && dev <= 1e-3;
                 }});

  out.push_back({8, "low-T entropy exponents: 5 (asymptotic), 1 (PFA), ~3 (r = 0.45) (slow)", 1200.0, true,
                 [](std::string& msg) {
                   const ZGrid low{1e-3, 20.0, 200};
                   const auto a = scan_entropy_features(0.01, low, 1e-9, Branch::asymptotic);
                   const auto p = scan_entropy_features(0.45, low, 1e-9, Branch::pfa);
                   const auto n = scan_entropy_features(0.45, ZGrid{0.05, 20.0, 200}, 1e-9);
                   msg = "alpha = " + fmt(a.low_T_exponent, 5) + " (asymptotic), " + fmt(p.low_T_exponent, 5) +
                         " (pfa), " + fmt(n.low_T_exponent, 5) + " (numeric r=0.45, z in [" +
                         fmt(n.fit_window.first, 3) + ", " + fmt(n.fit_window.second, 3) + "])";
                   return std::abs(a.low_T_exponent - 5.0) <= 0.1 && std::abs(p.low_T_exponent - 1.0) <= 0.05 &&
                          std::abs(n.low_T_exponent - 3.0) <= 0.5;
                 }});

  out.push_back({9, "cross derivative dF/dT = dS/dd", 120.0, false, [](std::string& msg) {
                   const auto g = Geometry::from_ratio(0.1);
                   const auto th = ThermalPoint::from_z(1.0, g.d);
                   const auto num = cross_derivative_check(g, th, 1e-12);
                   double worst = 0.0;
                   for (double z : {0.3, 1.0, 2.0, 5.0}) {
                     worst = std::max(worst, cross_derivative_check_asymptotic(z).relative_mismatch());
                   }
                   msg = "numeric (0.1, 1): " + fmt(num.relative_mismatch(), 3) + "; closed forms: " + fmt(worst, 3);
                   return num.relative_mismatch() < 1e-4 && worst < 1e-10;
                 }});

  out.push_back({10, "force attractive on the test grid; dF/dT changes sign (asymptotic)", 60.0, false,
                 [](std::string& msg) {
                   int positive = 0;
                   int samples = 0;
                   double neg_lo = 0.0, neg_hi = 0.0, pos_lo = 0.0, pos_hi = 0.0;
                   bool in_neg = false, in_pos = false, seen_neg = false, seen_pos = false;
                   const int n = 2000;
                   for (int i = 0; i < n; ++i) {
                     const double z = 1e-3 * std::pow(1e5, static_cast<double>(i) / (n - 1));
                     ++samples;
                     if (!(f_ad(z) < 0.0)) ++positive;
                     for (double r : {0.3, 0.45, 0.49}) {
                       ++samples;
                       if (!(pfa_f_ad(r, z) < 0.0)) ++positive;
                     }
                     const double slope = f_ad_slope(z);
                     if (slope < 0.0 && !seen_neg) {
                       if (!in_neg) neg_lo = z;
                       in_neg = true;
                       neg_hi = z;
                     } else if (in_neg) {
                       in_neg = false;
                       seen_neg = true;
                     }
                     if (slope > 0.0 && !seen_pos) {
                       if (!in_pos) pos_lo = z;
                       in_pos = true;
                       pos_hi = z;
                     } else if (in_pos) {
                       in_pos = false;
                       seen_pos = true;
                     }
                   }
                   for (double r : {0.1, 0.2, 0.3}) {
                     const auto g = Geometry::from_ratio(r);
                     for (double z : {0.1, 1.0, 10.0}) {
                       ++samples;
                       if (!(force_numeric(g, ThermalPoint::from_z(z, g.d), 1e-9).value < 0.0)) ++positive;
                     }
                   }
                   seen_neg = seen_neg || in_neg;
                   seen_pos = seen_pos || in_pos;
                   msg = std::to_string(positive) + " non-attractive of " + std::to_string(samples) +
                         " samples; dF/dT < 0 on z in [" + fmt(neg_lo, 4) + ", " + fmt(neg_hi, 4) +
                         "], > 0 on [" + fmt(pos_lo, 4) + ", " + fmt(pos_hi, 4) + "]";
                   return positive == 0 && seen_neg && seen_pos;
                 }});

  out.push_back({11, "oracle suites: Bessel, dipole trace, PFA double sum", 60.0, false,
                 [testdata_dir](std::string& msg) {
                   const auto bessel = detail::read_golden(testdata_dir + "/oracle_bessel.txt");
                   double wb = 0.0;
                   for (const auto& row : bessel) {
                     const auto p = scaled_bessel_half(static_cast<int>(row.cols[0]), row.cols[1]);
                     wb = std::max({wb, detail::rel(p.i_scaled, row.cols[2]), detail::rel(p.k_scaled, row.cols[3])});
                   }
                   const auto dip = detail::read_golden(testdata_dir + "/oracle_dipole.txt");
                   double wd = 0.0;
                   for (const auto& row : dip) {
                     const double q = row.cols[0];
                     const double r = row.cols[1];
                     const double trace = -dipole_trace(Geometry::from_ratio(r), q);
                     wd = std::max(wd, detail::rel(trace, row.cols[2]));
                   }
                   const auto pf = detail::read_golden(testdata_dir + "/oracle_pfa.txt");
                   double wp = 0.0;
                   for (const auto& row : pf) wp = std::max(wp, detail::rel(pfa_energy_series(row.cols[0]), row.cols[1]));
                   msg = std::to_string(bessel.size()) + " Bessel (worst " + fmt(wb, 3) + "), " +
                         std::to_string(dip.size()) + " dipole (worst " + fmt(wd, 3) + "), " +
                         std::to_string(pf.size()) + " PFA (worst " + fmt(wp, 3) + ")";
                   return bessel.size() == 2000 && dip.size() == 9 && pf.size() == 20 && wb <= 1e-12 && wd <= 1e-10 &&
                          wp <= 1e-12;
                 }});
  return out;
}

/// Runs the checks, calling `emit` with each outcome as soon as it is known.
/// A non-empty `only` restricts the run to those criterion ids.
inline std::vector<Outcome> run(const std::string& testdata_dir, bool skip_slow,
                                const std::function<void(const Outcome&)>& emit, const std::vector<int>& only = {}) {
  std::vector<Outcome> results;
  for (const auto& c : checks(testdata_dir)) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    Outcome o;
    o.id = c.id;
    o.title = c.title;
    o.budget = c.budget;
    if (skip_slow && c.slow) {
      o.skipped = true;
      o.detail = "slow check skipped";
    } else {
      const auto t0 = std::chrono::steady_clock::now();
      try {
        o.pass = c.run(o.detail);
      } catch (const std::exception& e) {
        o.pass = false;
        o.detail = std::string("exception: ") + e.what();
      }
      o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      if (o.seconds > o.budget) {
        o.pass = false;
        o.detail += " (over time budget)";
      }
    }
    emit(o);
    results.push_back(o);
  }
  return results;
}

}  // namespace casimir::acceptance
