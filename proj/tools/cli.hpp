#pragma once

// casimir-spheres command line. Everything lives in run() so that tests can
// drive the tool in-process with captured streams.
//
// Exit codes: 0 ok, 2 bad input or failed validation, 3 numerical failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "acceptance_suite.hpp"
#include "casimir/casimir.hpp"

#ifndef CASIMIR_TESTDATA_DIR
#define CASIMIR_TESTDATA_DIR "testdata"
#endif

namespace casimir::cli {

using Cell = std::variant<double, std::string>;

struct Table {
  std::vector<std::string> comments;  ///< "# key=value" lines after the version header
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::pair<std::string, std::string>> features;  ///< appended by sweep
};

struct Options {
  std::optional<double> r, R, d, ell;
  std::string z, T;
  std::string branch = "auto";
  double tol = 1e-9;
  std::string output = "csv";
  std::string units = "ad";
  int jobs = 1;
  bool reproducible = false;
  std::string out;
  bool skip_force = false;
  int points = 0;
  std::vector<double> r_list;
  std::string figure_id;
  bool skip_slow = false;
  std::string testdata = CASIMIR_TESTDATA_DIR;
  std::vector<int> only;
};

inline std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

/// "a", "a,b,c", "a:b:logN" or "a:b:linN".
inline std::vector<double> parse_grid(const std::string& spec, const char* what) {
  auto bad = [&](const std::string& why) {
    return ValidationError(std::string("--") + what + " '" + spec + "': " + why);
  };
  auto to_double = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw bad("not a number: '" + s + "'");
    }
    if (used != s.size() || !std::isfinite(v)) throw bad("not a number: '" + s + "'");
    return v;
  };
  std::vector<double> out;
  if (spec.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw bad("range must be a:b:logN or a:b:linN");
    const double a = to_double(parts[0]);
    const double b = to_double(parts[1]);
    const bool log = parts[2].rfind("log", 0) == 0;
    const bool lin = parts[2].rfind("lin", 0) == 0;
    if (!log && !lin) throw bad("range must be a:b:logN or a:b:linN");
    int n = 0;
    try {
      n = std::stoi(parts[2].substr(3));
    } catch (const std::exception&) {
      throw bad("bad point count");
    }
    if (n < 2 || !(b > a)) throw bad("need a < b and N >= 2");
    if (log && !(a > 0.0)) throw bad("log range needs a > 0");
    for (int i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) / (n - 1);
      out.push_back(log ? std::exp(std::log(a) + t * (std::log(b) - std::log(a))) : a + t * (b - a));
    }
    out.front() = a;
    out.back() = b;
  } else {
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ',');) out.push_back(to_double(p));
    if (out.empty()) throw bad("empty");
    for (std::size_t i = 1; i < out.size(); ++i) {
      if (!(out[i] > out[i - 1])) throw bad("values must be strictly increasing");
    }
  }
  return out;
}

/// Accepted parameterizations: --r | --R --d | --R --ell | --r --R.
struct ResolvedGeometry {
  double r = 0.0;
  std::optional<double> R, d;
};

inline ResolvedGeometry resolve_geometry(const Options& o) {
  const int mask = (o.r ? 1 : 0) | (o.R ? 2 : 0) | (o.d ? 4 : 0) | (o.ell ? 8 : 0);
  ResolvedGeometry g;
  switch (mask) {
    case 1:
      g.r = *o.r;
      break;
    case 1 | 2:
      g.r = *o.r;
      g.R = *o.R;
      if (!(g.r > 0.0)) throw DomainError("r must be > 0");
      g.d = *o.R / g.r;
      break;
    case 2 | 4: g.R = *o.R; g.d = *o.d; break;
    case 2 | 8: g.R = *o.R; g.d = *o.ell + 2.0 * *o.R; break;
    default:
      throw ValidationError("give exactly one geometry: --r, --R with --d, --R with --ell, or --r with --R");
  }
  if (g.R) {
    const Geometry geo(*g.R, *g.d);  // d > 2R with explicit text
    g.r = geo.r();
  }
  if (!(g.r > 0.0) || !(g.r < 0.5)) throw DomainError("need 0 < r < 0.5 (spheres must not overlap), got r=" + num(g.r));
  return g;
}

inline std::vector<double> resolve_z(const Options& o, const ResolvedGeometry& g, const std::string& fallback) {
  if (!o.z.empty() && !o.T.empty()) throw ValidationError("give either --z or --T, not both");
  if (!o.T.empty()) {
    if (!g.d) throw ValidationError("--T needs a dimensional geometry (--R with --d, --ell or --r)");
    std::vector<double> z;
    for (double T : parse_grid(o.T, "T")) z.push_back(ThermalPoint::from_temperature(T, *g.d).z);
    return z;
  }
  if (!o.z.empty()) return parse_grid(o.z, "z");
  if (fallback.empty()) throw ValidationError("give --z or --T");
  return parse_grid(fallback, "z");
}

inline Branch resolve_branch(const std::string& name, double r, std::ostream& err) {
  if (name == "numeric") return Branch::numeric;
  if (name == "asymptotic") return Branch::asymptotic;
  if (name == "pfa") return Branch::pfa;
  const auto choice = select_branch(r);
  if (!choice.warning.empty()) err << "warning: " << choice.warning << "; auto picked " << to_string(choice.branch) << '\n';
  return choice.branch;
}

inline std::string timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline void write_csv(const Table& t, const Options& o, std::ostream& os) {
  os << "# casimir-spheres v" << version << '\n';
  if (!o.reproducible) os << "# generated " << timestamp() << '\n';
  for (const auto& c : t.comments) os << "# " << c << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      os << (i ? "," : "");
      if (const auto* v = std::get_if<double>(&row[i])) {
        os << num(*v);
      } else {
        os << std::get<std::string>(row[i]);
      }
    }
    os << '\n';
  }
  for (const auto& [k, v] : t.features) os << "# feature " << k << '=' << v << '\n';
}

inline void write_json(const Table& t, const Options& o, std::ostream& os) {
  nlohmann::ordered_json j;
  j["format"] = "casimir-spheres";
  j["version"] = version;
  if (!o.reproducible) j["generated"] = timestamp();
  j["meta"] = t.comments;
  j["columns"] = t.columns;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    auto jr = nlohmann::ordered_json::array();
    for (const auto& c : row) {
      if (const auto* v = std::get_if<double>(&c)) {
        jr.push_back(std::isfinite(*v) ? nlohmann::ordered_json(*v) : nlohmann::ordered_json());
      } else {
        jr.push_back(std::get<std::string>(c));
      }
    }
    rows.push_back(std::move(jr));
  }
  j["rows"] = std::move(rows);
  if (!t.features.empty()) {
    nlohmann::ordered_json f;
    for (const auto& [k, v] : t.features) f[k] = v;
    j["features"] = std::move(f);
  }
  os << j.dump(1) << '\n';
}

// ---------------------------------------------------------------------------
// energy / entropy / force / sweep

inline Table curve_table(const std::string& mode, const Options& o, std::ostream& err) {
  const auto g = resolve_geometry(o);
  const bool si_units = o.units == "si";
  if (si_units && !g.R) throw ValidationError("--units si needs --R (metres)");
  const auto zs = resolve_z(o, g, mode == "sweep" ? "0.05:20:log200" : "");
  const Branch b = resolve_branch(o.branch, g.r, err);
  const bool with_force = (mode == "force" || mode == "sweep") && !o.skip_force;

  const EntropyCurve ent(b, g.r, o.tol);
  const auto curve = thermo_curve(ent, zs, o.tol, with_force, o.jobs);

  Table t;
  t.comments.push_back("mode=" + mode);
  t.comments.push_back("r=" + num(g.r));
  if (g.R) t.comments.push_back("R=" + num(*g.R) + " d=" + num(*g.d));
  t.comments.push_back("branch=" + to_string(b));
  t.comments.push_back("tol=" + num(o.tol));
  t.comments.push_back("units=" + o.units);
  if (si_units) {
    t.columns = {"z", "T_K", "E_J", "S_J_per_K", "F_N", "branch", "l_max", "err_est"};
  } else {
    t.columns = {"z", "E_ad", "S_ad", "F_ad", "branch", "l_max", "err_est"};
  }
  const std::string l_max = std::to_string(curve.l_max);
  for (const auto& s : curve.samples) {
    if (si_units) {
      const double R = *g.R;
      const double d = *g.d;
      const double R6 = std::pow(R, 6);
      const double T = s.z * si::hbar_c / (2.0 * pi * si::k_B * d);
      const double E = si::hbar_c * R6 * s.e_ad / (2.0 * pi * std::pow(d, 7));
      const double S = si::k_B * R6 * s.s_ad / std::pow(d, 6);
      const double F = si::hbar_c * R6 * s.f_ad / (2.0 * pi * std::pow(d, 8));
      const double dS = si::k_B * R6 * s.err_est / std::pow(d, 6);
      t.rows.push_back({s.z, T, E, S, F, to_string(b), l_max, dS});
    } else {
      t.rows.push_back({s.z, s.e_ad, s.s_ad, s.f_ad, to_string(b), l_max, s.err_est});
    }
  }

  if (mode == "sweep") {
    std::vector<double> positive;
    for (double z : zs) {
      if (z > 0.0) positive.push_back(z);
    }
    const auto rep = scan_entropy_features(ent, positive);
    t.features.emplace_back("r", num(rep.r));
    t.features.emplace_back("branch", to_string(rep.branch));
    t.features.emplace_back("has_negative_interval", rep.has_negative_interval ? "true" : "false");
    t.features.emplace_back("negative_interval",
                            rep.interval ? num(rep.interval->first) + "," + num(rep.interval->second) : "none");
    t.features.emplace_back("min_S_over_Scl", num(rep.min_S_over_Scl));
    t.features.emplace_back("z_at_min", num(rep.z_at_min));
    t.features.emplace_back("low_T_exponent", num(rep.low_T_exponent));
    t.features.emplace_back("fit_window", num(rep.fit_window.first) + "," + num(rep.fit_window.second));
  }
  return t;
}

// ---------------------------------------------------------------------------
// figure data

inline std::vector<double> figure_grid(const Options& o, double a, double b, int n) {
  if (!o.z.empty()) return parse_grid(o.z, "z");
  const int pts = o.points > 0 ? o.points : n;
  return ZGrid{a, b, pts}.values();
}

inline Table figure_table(const Options& o) {
  const std::string& id = o.figure_id;
  Table t;
  t.comments.push_back("figure=" + id);
  const double e0 = detail::e_ad_zero;
  const double f0 = 7.0 * detail::e_ad_zero;
  const double p4 = pi * pi * pi * pi;

  if (id == "1-left") {
    t.columns = {"z", "E_over_E0", "quantum_limit", "classical_limit"};
    for (double z : figure_grid(o, 1e-2, 10.0, 400)) t.rows.push_back({z, e_ad(z) / e0, 1.0, -3.75 * z / e0});
  } else if (id == "1-right") {
    t.columns = {"x", "E_over_E0", "quantum_limit", "classical_limit"};
    for (double x : figure_grid(o, 1e-2, 10.0, 400)) {
      t.rows.push_back({x, 180.0 * x * pfa_energy_series(x) / p4, 1.0, 90.0 * x * zeta3 / p4});
    }
  } else if (id == "2-left") {
    t.columns = {"z", "S_over_Scl", "low_T_correction", "classical_limit"};
    const double z5 = 1.0 / (18.0 * 3.75);
    for (double z : figure_grid(o, 1e-2, 10.0, 400)) t.rows.push_back({z, s_ad(z) / 3.75, z5 * std::pow(z, 5), 1.0});
  } else if (id == "2-right") {
    t.columns = {"x", "S_over_Scl", "low_T_correction", "classical_limit"};
    for (double x : figure_grid(o, 1e-2, 10.0, 400)) {
      t.rows.push_back({x, 2.0 * pfa_entropy_series(x) / zeta3, pi * pi * x / (9.0 * zeta3), 1.0});
    }
  } else if (id == "4-left") {
    t.columns = {"z", "F_over_F0", "quantum_limit", "classical_limit", "dF_dz_ad"};
    for (double z : figure_grid(o, 1e-2, 10.0, 400)) {
      t.rows.push_back({z, f_ad(z) / f0, 1.0, -22.5 * z / f0, f_ad_slope(z)});
    }
  } else if (id == "4-right") {
    t.columns = {"x", "F_over_F0", "quantum_limit", "classical_limit"};
    for (double x : figure_grid(o, 1e-2, 10.0, 400)) {
      t.rows.push_back({x, 90.0 * x * pfa_force_series(x) / p4, 1.0, 45.0 * x * zeta3 / p4});
    }
  } else if (id == "3-left" || id == "3-right") {
    const bool left = id == "3-left";
    const auto zs = figure_grid(o, 0.05, 20.0, 200);
    std::vector<double> rs = o.r_list;
    if (rs.empty()) {
      rs = left ? std::vector<double>{0.1, 0.2, 0.3, 0.4, 0.41, 0.45}
                : std::vector<double>{0.05, 0.1, 0.2, 0.3, 0.4, 0.41, 0.45};
    }
    t.comments.push_back("tol=" + num(o.tol));
    if (left) {
      t.columns = {"series", "r", "z", "S_over_Scl"};
      for (double z : zs) t.rows.push_back({"asymptotic", 0.0, z, s_ad(z) / 3.75});
    } else {
      t.comments.push_back("S_over_Spfa_gap divides by the PFA entropy at x = z (1 - 2r)");
      t.comments.push_back("S_over_Spfa_centre divides by the PFA entropy at x = z");
      t.columns = {"series", "r", "z", "S_over_Spfa_gap", "S_over_Spfa_centre"};
    }
    for (double r : rs) {
      const EntropyCurve ent(Branch::numeric, r, o.tol);
      std::vector<double> s(zs.size());
      detail::parallel_for(zs.size(), o.jobs, [&](std::size_t i) { s[i] = ent.s(zs[i]).value; });
      for (std::size_t i = 0; i < zs.size(); ++i) {
        const double z = zs[i];
        if (left) {
          t.rows.push_back({"numeric", r, z, s[i] / ent.s_classical()});
        } else {
          t.rows.push_back({"numeric", r, z, s[i] / pfa_s_ad(r, z), s[i] / pfa_s_ad(r, z / (1.0 - 2.0 * r))});
        }
      }
    }
    if (left) {
      for (double z : zs) t.rows.push_back({"pfa", 0.45, z, pfa_s_ad(0.45, z) / classical_s_ad(Branch::pfa, 0.45)});
    }
  } else {
    throw ValidationError("unknown figure id '" + id + "' (1-left, 1-right, 2-left, 2-right, 3-left, 3-right, 4-left, 4-right)");
  }
  return t;
}

// ---------------------------------------------------------------------------

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Casimir free energy, entropy and force between two equal perfect-metal spheres", "casimir-spheres"};
  app.set_version_flag("--version", std::string("casimir-spheres ") + version);
  app.set_config("--config", "", "key=value file; command-line flags take precedence");
  app.require_subcommand(1);

  Options o;
  double r = 0, R = 0, d = 0, ell = 0;
  auto* opt_r = app.add_option("--r", r, "R/d");
  auto* opt_R = app.add_option("--R", R, "sphere radius [m]");
  auto* opt_d = app.add_option("--d", d, "centre distance [m]");
  auto* opt_ell = app.add_option("--ell", ell, "surface gap [m]");
  app.add_option("--z", o.z, "d/lambda_T: value, list a,b,c or range a:b:logN / a:b:linN");
  app.add_option("--T", o.T, "temperature [K], same forms as --z");
  app.add_option("--branch", o.branch)->check(CLI::IsMember({"auto", "numeric", "asymptotic", "pfa"}));
  app.add_option("--tol", o.tol, "determinant tolerance")->check(CLI::PositiveNumber);
  app.add_option("--output", o.output)->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--units", o.units)->check(CLI::IsMember({"ad", "si"}));
  app.add_option("--jobs", o.jobs, "threads for grid points")->check(CLI::PositiveNumber);
  app.add_flag("--reproducible", o.reproducible, "omit the timestamp comment");
  app.add_option("--out", o.out, "write to file instead of stdout");
  app.add_flag("--skip-force", o.skip_force, "do not compute the numeric force");
  app.add_option("--points", o.points, "grid size for figures")->check(CLI::PositiveNumber);
  app.add_option("--r-list", o.r_list, "r values for figure 3")->delimiter(',');
  app.add_option("--id", o.figure_id, "figure id, e.g. 2-left");
  app.add_flag("--skip-slow", o.skip_slow, "validate: skip the slow criteria");
  app.add_option("--testdata", o.testdata, "validate: golden file directory");
  app.add_option("--only", o.only, "validate: criterion ids")->delimiter(',');

  std::vector<CLI::App*> subs;
  subs.push_back(app.add_subcommand("energy", "E_ad (and S_ad) on a z grid"));
  subs.push_back(app.add_subcommand("entropy", "S_ad on a z grid"));
  subs.push_back(app.add_subcommand("force", "F_ad on a z grid"));
  subs.push_back(app.add_subcommand("sweep", "curve plus negative-entropy feature report"));
  subs.push_back(app.add_subcommand("figure", "figure data by --id"));
  subs.push_back(app.add_subcommand("validate", "acceptance criteria, one PASS/FAIL line each"));
  for (auto* s : subs) s->fallthrough();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << "casimir-spheres " << version << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error:validation: " << e.what() << '\n';
    return 2;
  }
  if (*opt_r) o.r = r;
  if (*opt_R) o.R = R;
  if (*opt_d) o.d = d;
  if (*opt_ell) o.ell = ell;
  const std::string mode = app.get_subcommands().front()->get_name();

  try {
    if (mode == "validate") {
      int failed = 0, passed = 0, skipped = 0;
      acceptance::run(
          o.testdata, o.skip_slow,
          [&](const acceptance::Outcome& oc) {
            out << oc.line() << std::endl;
            if (oc.skipped) {
              ++skipped;
            } else if (oc.pass) {
              ++passed;
            } else {
              ++failed;
            }
          },
          o.only);
      out << "validate: " << passed << " passed, " << failed << " failed, " << skipped << " skipped\n";
      return failed ? 2 : 0;
    }
    Table t;
    if (mode == "figure") {
      if (o.figure_id.empty()) throw ValidationError("figure needs --id");
      t = figure_table(o);
    } else {
      t = curve_table(mode, o, err);
    }
    std::ofstream file;
    std::ostream* os = &out;
    if (!o.out.empty()) {
      file.open(o.out);
      if (!file) throw ValidationError("cannot open --out '" + o.out + "'");
      os = &file;
    }
    if (o.output == "json") {
      write_json(t, o, *os);
    } else {
      write_csv(t, o, *os);
    }
    return 0;
  } catch (const Error& e) {
    err << "error:" << to_string(e.kind()) << ": " << e.what() << '\n';
    return e.is_numerical() ? 3 : 2;
  } catch (const std::exception& e) {
    err << "error:internal: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace casimir::cli
