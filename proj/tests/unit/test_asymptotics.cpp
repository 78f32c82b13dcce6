#include <gtest/gtest.h>

#include <cmath>

#include "casimir/asymptotics.hpp"

using namespace casimir;

namespace {

double deriv(double (*f)(double), double z, double h = 1e-3) {
  // five-point stencil
  return (f(z - 2 * h) - 8 * f(z - h) + 8 * f(z + h) - f(z + 2 * h)) / (12 * h);
}

}  // namespace

TEST(DipoleSeries, ZeroTemperatureValue) {
  EXPECT_DOUBLE_EQ(e_ad(0.0), -143.0 / 8.0);
  EXPECT_NEAR(e_ad(1e-8), -143.0 / 8.0, 1e-12);
}

TEST(DipoleSeries, SummandIntegratesToZeroTemperatureValue) {
  // -int_0^inf h(q) dq = -(7.5/2 + 15/4 + 14.5*2/8 + 9*6/16 + 4.5*24/32) = -143/8
  double s = 0.0;
  const double dq = 1e-3;
  for (int i = 0; i < 40000; ++i) {
    const double q = (i + 0.5) * dq;
    s += dipole_summand(q) * dq;
  }
  EXPECT_NEAR(-s, e_ad(0.0), 1e-6);
}

TEST(DipoleSeries, SeriesAndClosedFormAgreeAtSwitch) {
  for (double z : {0.9, 0.999, 1.0, 1.001, 1.2}) {
    EXPECT_NEAR(detail::e_ad_series(z), detail::e_ad_closed(z), 1e-12 * std::abs(e_ad(z))) << z;
  }
}

TEST(DipoleSeries, ClassicalSlope) {
  EXPECT_NEAR(e_ad(40.0) / 40.0, -3.75, 1e-12);
  EXPECT_NEAR(s_ad(40.0), 3.75, 1e-12);
  EXPECT_NEAR(f_ad(40.0) / 40.0, -22.5, 1e-12);
}

TEST(DipoleSeries, LowTemperatureOrder) {
  const double d1 = e_low_T(0.2) - e_ad(0.2);
  const double d2 = e_low_T(0.1) - e_ad(0.1);
  EXPECT_GT(d1, 0.0);
  EXPECT_GT(d2, 0.0);
  EXPECT_GE(std::log2(d1 / d2), 9.0);
  EXPECT_NEAR(s_ad(0.05) / std::pow(0.05, 5), 1.0 / 18.0, 1e-3);
  // next term is O(z^9)
  EXPECT_NEAR(s_low_T(0.05) / s_ad(0.05), 1.0, 1e-5);
  EXPECT_NEAR(s_low_T(0.025) / s_ad(0.025), 1.0, 1e-5 / 16.0);
}

TEST(DipoleSeries, HighTemperatureRemainder) {
  // The two-term form is n <= 1 of the frequency sum; the remainder starts at n = 2.
  for (double z : {4.0, 6.0, 8.0}) {
    const double rem = e_high_T(z) - e_ad(z);
    EXPECT_NEAR(rem / (z * dipole_summand(2.0 * z)), 1.0, 5e-3) << z;
  }
  EXPECT_NEAR(s_high_T(12.0), s_ad(12.0), 1e-12);
}

TEST(DipoleSeries, ExpansionsBoundFromAbove) {
  for (double z = 0.01; z <= 20.0; z *= 1.1) {
    EXPECT_GE(e_low_T(z), e_ad(z) - 1e-14) << z;
    EXPECT_GE(e_high_T(z), e_ad(z) - 1e-12 * std::abs(e_ad(z))) << z;
  }
}

TEST(DipoleSeries, EntropyHasTwoZeros) {
  const auto [z1, z2] = find_entropy_zeros();
  EXPECT_LT(z1, z2);
  EXPECT_GT(z1, 0.5);
  EXPECT_LT(z2, 5.0);
  EXPECT_NEAR(s_ad(z1), 0.0, 1e-12);
  EXPECT_NEAR(s_ad(z2), 0.0, 1e-12);
  EXPECT_LT(s_ad(0.5 * (z1 + z2)), 0.0);
  EXPECT_GT(s_ad(0.5 * z1), 0.0);
  EXPECT_GT(s_ad(2.0 * z2), 0.0);
  EXPECT_EQ(entropy_zeros_in(0.01, 100.0, 20000).size(), 2u);
}

TEST(DipoleSeries, EnergyRatioMaximumAtFirstZero) {
  const auto [z1, z2] = find_entropy_zeros();
  const auto [zs, excess] = find_e_ratio_max();
  EXPECT_NEAR(zs, z1, 1e-10);
  EXPECT_GT(excess, 0.0);
  const double ratio_at = e_ad(zs) / e_ad(0.0);
  for (double dz : {-0.05, 0.05}) EXPECT_LT(e_ad(zs + dz) / e_ad(0.0), ratio_at);
  (void)z2;
}

TEST(DipoleSeries, DerivativeIdentities) {
  for (double z : {0.1, 0.5, 0.99, 1.0, 1.01, 2.0, 5.0, 15.0}) {
    const double s = s_ad(z);
    // Absolute floor: the stencil's roundoff is ~eps |e| / h.
    const double scale = std::max(std::abs(s), 1.0);
    EXPECT_NEAR(-deriv(e_ad, z), s, 1e-9 * scale) << z;
    EXPECT_NEAR(f_ad(z), 7.0 * e_ad(z) + z * s, 1e-12 * std::abs(f_ad(z))) << z;
    const double slope = f_ad_slope(z);
    EXPECT_NEAR(deriv(f_ad, z), slope, 1e-8 * std::max(std::abs(slope), 1.0)) << z;
    EXPECT_NEAR(slope, z * deriv(s_ad, z) - 6.0 * s, 1e-8 * std::max(std::abs(slope), 1.0)) << z;
  }
}

TEST(DipoleSeries, ForceZeroTemperature) {
  EXPECT_DOUBLE_EQ(f_ad(0.0), -125.125);
  EXPECT_NEAR(f_low_T(0.1), f_ad(0.1), 1e-9);
}

TEST(DipoleSeries, NegativeEnergyAndForce) {
  for (double z = 0.0; z <= 100.0; z += 0.25) {
    EXPECT_LT(e_ad(z), 0.0) << z;
    EXPECT_LT(f_ad(z), 0.0) << z;
  }
}

TEST(DipoleSeries, PointBundle) {
  const auto p = asymptotic_point(1.3);
  EXPECT_EQ(p.z, 1.3);
  EXPECT_DOUBLE_EQ(p.e_ad, e_ad(1.3));
  EXPECT_DOUBLE_EQ(p.s_ad, s_ad(1.3));
  EXPECT_DOUBLE_EQ(p.f_ad, f_ad(1.3));
}

TEST(DipoleSeries, Errors) {
  EXPECT_THROW(e_ad(-1.0), DomainError);
  EXPECT_THROW(s_ad(std::nan("")), DomainError);
  EXPECT_THROW(f_ad(INFINITY), DomainError);
}
