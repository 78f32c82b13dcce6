#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "casimir/casimir.hpp"
#include "oracles.hpp"

using namespace casimir;
using oracle::hp;
using oracle::mp;

namespace {

// Rows of whitespace-separated numbers; '#' lines skipped.
std::vector<std::vector<std::string>> read_rows(const std::string& name) {
  std::ifstream f(std::string(CASIMIR_TESTDATA_DIR) + "/" + name);
  EXPECT_TRUE(f.good()) << name;
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream is(line);
    std::vector<std::string> row;
    std::string cell;
    while (is >> cell) row.push_back(cell);
    rows.push_back(row);
  }
  return rows;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

double rel_mp(const std::string& a, const std::string& b) { return static_cast<double>(abs(mp(a) / mp(b) - 1)); }

}  // namespace

TEST(OracleSelf, BesselClosedForms) {
  // I_{1/2}(1) = sqrt(2/pi) sinh 1, K_{1/2}(1) = sqrt(pi/2) e^{-1}
  const auto b = oracle::bessel_half(0, hp(1));
  const hp pi_v = boost::math::constants::pi<hp>();
  EXPECT_LT(static_cast<double>(abs(b.i_scaled / (sqrt(2 / pi_v) * sinh(hp(1)) * exp(hp(-1))) - 1)), 1e-100);
  EXPECT_LT(static_cast<double>(abs(b.k_scaled - sqrt(pi_v / 2))), 1e-100);
}

TEST(OracleSelf, BesselWronskian) {
  for (int l : {0, 5, 20, 29}) {
    for (const char* xs : {"1e-4", "0.3", "7", "60"}) {
      const hp x(xs);
      const auto a = oracle::bessel_half(l, x);
      const auto b = oracle::bessel_half(l + 1, x);
      const hp w = a.i_scaled * b.k_scaled + b.i_scaled * a.k_scaled;
      EXPECT_LT(static_cast<double>(abs(w * x - 1)), 1e-24) << l << ' ' << xs;
    }
  }
}

TEST(OracleSelf, DipoleFitCloses) {
  const auto& fit = oracle::dipole_fit();
  EXPECT_LT(static_cast<double>(fit.closure_residual), 1e-40);
  // Tr N is r^6 times a function of q.
  const auto a = oracle::oracle_dipole_summand(1.0, 0.1);
  const auto b = oracle::oracle_dipole_summand(1.0, 0.2);
  EXPECT_LT(std::abs(static_cast<double>(mp(b.value) / mp(a.value)) - 64.0), 1e-20);
}

TEST(OracleSelf, PfaLargeArgumentIsStaticRow) {
  const auto o = oracle::oracle_pfa_double_sum(40.0);
  EXPECT_LT(rel(std::stod(o.value), 0.5 * zeta3), 1e-15);
}

TEST(OracleGolden, FilesAreCurrent) {
  // Spot-check each golden file against a fresh high-precision evaluation.
  const auto bessel = read_rows("oracle_bessel.txt");
  ASSERT_GE(bessel.size(), 2000u);
  for (std::size_t i = 0; i < bessel.size(); i += 199) {
    const int l = std::stoi(bessel[i][0]);
    const double x = std::stod(bessel[i][1]);
    EXPECT_LT(rel_mp(oracle::oracle_bessel_i(l, x).value, bessel[i][2]), 1e-24);
    EXPECT_LT(rel_mp(oracle::oracle_bessel_k(l, x).value, bessel[i][3]), 1e-24);
  }
  const auto pfa = read_rows("oracle_pfa.txt");
  ASSERT_EQ(pfa.size(), 20u);
  for (std::size_t i = 0; i < pfa.size(); i += 6) {
    EXPECT_LT(rel_mp(oracle::oracle_pfa_double_sum(std::stod(pfa[i][0])).value, pfa[i][1]), 1e-24);
  }
  const auto dip = read_rows("oracle_dipole.txt");
  ASSERT_EQ(dip.size(), 9u);
  for (const auto& row : dip) {
    EXPECT_LT(rel_mp(oracle::oracle_dipole_summand(std::stod(row[0]), std::stod(row[1])).value, row[2]), 1e-20);
  }
  const auto ld = read_rows("oracle_logdet.txt");
  ASSERT_EQ(ld.size(), 4u);
  // The smallest case is cheap enough to recompute.
  EXPECT_LT(rel_mp(oracle::oracle_logdet(0.1, 2.0, 8).value, ld[2][3]), 1e-14);
}

TEST(LibraryVsOracle, ScaledBessel) {
  double worst = 0.0;
  for (const auto& row : read_rows("oracle_bessel.txt")) {
    const int l = std::stoi(row[0]);
    const double x = std::stod(row[1]);
    const auto p = scaled_bessel_half(l, x);
    worst = std::max({worst, rel(p.i_scaled, std::stod(row[2])), rel(p.k_scaled, std::stod(row[3]))});
  }
  EXPECT_LT(worst, 1e-12);
}

TEST(LibraryVsOracle, DipoleTrace) {
  for (const auto& row : read_rows("oracle_dipole.txt")) {
    const double q = std::stod(row[0]);
    const double r = std::stod(row[1]);
    EXPECT_LT(rel(-dipole_trace(Geometry::from_ratio(r), q), std::stod(row[2])), 1e-13) << q << ' ' << r;
  }
  for (double q : {5.0, 10.0, 20.0}) {
    const double want = std::stod(oracle::oracle_dipole_summand(q, 1.0).value);
    EXPECT_LT(rel(dipole_summand(q), want), 1e-10) << q;
  }
}

TEST(LibraryVsOracle, PfaSeries) {
  for (const auto& row : read_rows("oracle_pfa.txt")) {
    const double x = std::stod(row[0]);
    EXPECT_LT(rel(pfa_energy_series(x), std::stod(row[1])), 1e-13) << x;
  }
  EXPECT_LT(rel(pfa_energy_series(1.0), std::stod(oracle::oracle_pfa_double_sum(1.0).value)), 1e-14);
}

TEST(LibraryVsOracle, LogDeterminant) {
  for (const auto& row : read_rows("oracle_logdet.txt")) {
    RoundTripOptions opt;
    opt.l_max_fixed = std::stoi(row[2]);
    opt.tol = 1e-15;  // keep every m; the oracle sums all of them
    const double v = logdet_one_minus_n_adim(std::stod(row[0]), std::stod(row[1]), opt).value;
    EXPECT_LT(rel(v, std::stod(row[3])), 1e-10) << row[0] << ' ' << row[1];
  }
}

TEST(LibraryVsOracle, Wigner3j) {
  for (int j1 = 1; j1 <= 25; j1 += 4) {
    for (int j2 = 1; j2 <= 25; j2 += 3) {
      for (int m : {0, 1, std::min(j1, j2)}) {
        for (int j3 = std::abs(j1 - j2); j3 <= j1 + j2; ++j3) {
          const double want = static_cast<double>(oracle::wigner3j_racah(j1, j2, j3, m, -m, 0));
          EXPECT_NEAR(wigner3j(j1, j2, j3, m, -m, 0), want, 1e-13) << j1 << ' ' << j2 << ' ' << j3 << ' ' << m;
        }
      }
    }
  }
}

TEST(LibraryVsOracle, TMatrixElements) {
  const hp pih = boost::math::constants::pi<hp>();
  for (auto [l, x] : {std::pair{3, 2.0}, std::pair{2, 1.5}, std::pair{1, 0.01}, std::pair{10, 4.0}}) {
    const hp xh(x);
    const auto b = oracle::bessel_half(l, xh);
    const auto bm = oracle::bessel_half(l - 1, xh);
    const hp un = exp(2 * xh);
    const double mm = static_cast<double>(-pih / 2 * un * b.i_scaled / b.k_scaled);
    const double ee = static_cast<double>(-pih / 2 * un * (l * b.i_scaled - xh * bm.i_scaled) /
                                          (l * b.k_scaled + xh * bm.k_scaled));
    EXPECT_LT(rel(tmatrix_mm(l, x), mm), 1e-13) << l << ' ' << x;
    EXPECT_LT(rel(tmatrix_ee(l, x), ee), 1e-12) << l << ' ' << x;
  }
}
