#include <gtest/gtest.h>

#include <cmath>

#include "casimir/asymptotics.hpp"
#include "casimir/matsubara.hpp"

using namespace casimir;

namespace {

// d = 1 micron keeps SI magnitudes ordinary.
constexpr double kD = 1e-6;

Geometry geo(double r) { return Geometry::from_ratio(r, kD); }

double dipole_energy(double r, double z) {
  return si::hbar_c * std::pow(r, 6) * e_ad(z) / (2.0 * pi * kD);
}

}  // namespace

TEST(FreeEnergy, ClassicalCoefficientAtSmallRatio) {
  const double r = 0.01;
  const auto th = ThermalPoint::from_z(10.0, kD);
  const double cl = -15.0 * si::k_B * th.T * std::pow(r, 6) / 4.0;
  EXPECT_NEAR(free_energy(geo(r), th, 1e-9).energy / cl, 1.0, 0.01);
}

TEST(FreeEnergy, DipoleClosedFormAtSmallRatio) {
  const auto th = ThermalPoint::from_z(1.0, kD);
  EXPECT_NEAR(free_energy(geo(0.01), th, 1e-10).energy / dipole_energy(0.01, 1.0), 1.0, 1e-3);
}

TEST(FreeEnergy, SixthPowerInRatio) {
  const auto th = ThermalPoint::from_z(1.0, kD);
  const double a = free_energy(geo(0.004), th, 1e-10).energy / std::pow(0.004, 6);
  const double b = free_energy(geo(0.002), th, 1e-10).energy / std::pow(0.002, 6);
  EXPECT_NEAR(a / b, 1.0, 1e-4);
}

TEST(FreeEnergy, TermsNegativeAndTailBounded) {
  const auto res = free_energy(geo(0.3), ThermalPoint::from_z(0.7, kD), 1e-9);
  EXPECT_EQ(res.method, SumMethod::matsubara_sum);
  EXPECT_LT(res.energy, 0.0);
  EXPECT_GE(res.tail_bound, 0.0);
  EXPECT_EQ(static_cast<long>(res.per_term.size()), res.n_terms_used);
  double sum = 0.0;
  for (double t : res.per_term) {
    EXPECT_LT(t, 0.0);
    sum += t;
  }
  EXPECT_NEAR(sum, res.energy, 1e-12 * std::abs(res.energy));
  EXPECT_GT(res.l_max_used, 0);
}

TEST(FreeEnergy, HighTemperatureIsStaticTerm) {
  // Only n = 0 survives: terms n >= 1 carry e^{-2 z n (1 - 2r)}.
  for (double r : {0.01, 0.1, 0.3, 0.4}) {
    const auto th = ThermalPoint::from_z(50.0, kD);
    const double e = free_energy(geo(r), th, 1e-12).energy;
    const double s = 0.5 * si::k_B * th.T * static_term(geo(r));
    EXPECT_LT(std::abs(e - s) / std::abs(e), 1e-6) << r;
  }
}

TEST(FreeEnergy, ContinuousAtZeroTemperature) {
  const auto g = geo(0.01);
  const double e0 = zero_T_energy(g, 1e-10).energy;
  const double e = free_energy(g, ThermalPoint::from_z(0.01, kD), 1e-10).energy;
  EXPECT_LT(std::abs(e / e0 - 1.0), 1e-4);
  // Against the three-term low-temperature form, up to the O(r^2) finite-size correction.
  EXPECT_LT(std::abs(e / dipole_energy(0.01, 0.0) - e_low_T(0.01) / e_low_T(0.0)), 2e-3);
}

TEST(FreeEnergy, ZeroTemperatureDispatch) {
  const auto res = free_energy(geo(0.2), ThermalPoint::from_temperature(0.0, kD), 1e-9);
  EXPECT_EQ(res.method, SumMethod::zero_T_quadrature);
  EXPECT_LT(res.energy, 0.0);
}

TEST(FreeEnergy, TermCeiling) {
  MatsubaraOptions opt;
  opt.n_ceiling = 3;
  EXPECT_THROW(free_energy(geo(0.3), ThermalPoint::from_z(0.01, kD), opt), NonConvergence);
}

TEST(ZeroT, LargeSeparationCoefficient) {
  const double r = 0.01;
  const double e0 = zero_T_energy(geo(r), 1e-9).energy;
  const double ref = -143.0 * si::hbar_c * std::pow(r, 6) / (16.0 * pi * kD);
  EXPECT_NEAR(e0 / ref, 1.0, 0.01);
}

TEST(ZeroT, CloseSpheresBindMoreThanDipoles) {
  const double e0 = zero_T_energy(geo(0.45), 1e-9).energy;
  EXPECT_LT(e0, 0.0);
  EXPECT_LT(e0, dipole_energy(0.45, 0.0));
}

TEST(StaticTerm, NegativeAndStable) {
  for (double r : {0.01, 0.2, 0.45}) EXPECT_LT(static_term(geo(r)), 0.0);
  const auto a = static_term_adim(0.45, {}, 1e-3);
  const auto b = static_term_adim(0.45, {}, 1e-4);
  EXPECT_LT(std::abs(a.value / b.value - 1.0), 1e-6);
  // Dipole static limit: -Tr N(0+) = -(15/2) r^6 from the per-frequency trace at q = 0.
  EXPECT_NEAR(static_term_adim(0.01).value / (-7.5 * std::pow(0.01, 6)), 1.0, 1e-3);
}

TEST(StaticTerm, ClassicalFreeEnergy) {
  const auto th = ThermalPoint::from_z(50.0, kD);
  const double e = free_energy(geo(0.01), th, 1e-10).energy;
  EXPECT_NEAR(e / (0.5 * si::k_B * th.T * static_term(geo(0.01))), 1.0, 1e-3);
}

TEST(LogDetTable, MatchesDirectEvaluation) {
  auto f = std::make_shared<const LogDetFunction>(0.35);
  const double f0 = f->static_value();
  const double tol = 1e-12 * std::abs(f0);
  LogDetTable t(f, tol);
  for (double q = 1e-3; q < t.q_max(); q *= 1.37) {
    EXPECT_NEAR(t(q), (*f)(q), 20.0 * tol + 1e-9 * std::abs((*f)(q))) << q;
  }
}

TEST(MatsubaraSum, GeometricSeries) {
  // f(q) = -e^{-q}: eps = z (f0/2 + sum_n -e^{-nz}) = z (-1/2 - 1/(e^z - 1)).
  const double z = 0.7;
  const auto s = matsubara_sum([](double q) { return -std::exp(-q); }, -1.0, z, 1e-14);
  EXPECT_NEAR(s.eps, z * (-0.5 - 1.0 / std::expm1(z)), 1e-13);
  EXPECT_THROW(matsubara_sum([](double) { return -1.0; }, -1.0, 0.0, 1e-9), DomainError);
}
