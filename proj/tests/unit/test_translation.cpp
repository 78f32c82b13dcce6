#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>

#include "casimir/translation.hpp"

using namespace casimir;

namespace {

// Parity of z-axis translation: P = (-1)^{l+1} on M, (-1)^l on E.
Eigen::VectorXd parity(int m, int l_max) {
  const int lmin = std::max(std::abs(m), 1);
  const int n = l_max - lmin + 1;
  Eigen::VectorXd p(2 * n);
  for (int i = 0; i < n; ++i) {
    const double s = ((lmin + i) % 2 == 0) ? 1.0 : -1.0;
    p[i] = -s;
    p[n + i] = s;
  }
  return p;
}

}  // namespace

TEST(Translation, BlockShape) {
  for (int m = 0; m <= 4; ++m) {
    const auto b = translation_block(m, 1.0, 6);
    EXPECT_EQ(b.size(), 2 * (6 - std::max(m, 1) + 1));
    EXPECT_EQ(b.l_min, std::max(m, 1));
    EXPECT_EQ(b.order_of(0), std::max(m, 1));
    EXPECT_FALSE(b.is_electric(0));
    EXPECT_TRUE(b.is_electric(b.size() - 1));
  }
}

TEST(Translation, Errors) {
  EXPECT_THROW(translation_block(5, 1.0, 3), DomainError);
  EXPECT_THROW(translation_block(0, 0.0, 3), DomainError);
  EXPECT_THROW(translation_block(0, -1.0, 3), DomainError);
}

TEST(Translation, DipoleSectorMatchesClosedForm) {
  for (double q : {0.05, 0.5, 1.0, 5.0, 20.0}) {
    const auto c = dipole_translation_limit(q);
    for (int m = -1; m <= 1; ++m) {
      const Eigen::MatrixXd u = translation_block(m, q, 1).unscaled();
      const Eigen::Matrix2d ref = c.block(m);
      EXPECT_LE((u - ref).cwiseAbs().maxCoeff(), 1e-13 * ref.cwiseAbs().maxCoeff()) << "q=" << q << " m=" << m;
    }
  }
}

TEST(Translation, ReverseDirectionIsParityConjugate) {
  for (double q : {0.3, 2.0, 15.0}) {
    for (int m = 0; m <= 3; ++m) {
      const int L = 8;
      const Eigen::MatrixXd u12 = translation_block(m, q, L, +1).unscaled();
      const Eigen::MatrixXd u21 = translation_block(m, q, L, -1).unscaled();
      const Eigen::VectorXd p = parity(m, L);
      const Eigen::MatrixXd pr = p.asDiagonal() * u12 * p.asDiagonal();
      EXPECT_LE((pr - u21).cwiseAbs().maxCoeff(), 1e-13 * u12.cwiseAbs().maxCoeff());
    }
  }
}

TEST(Translation, NegativeMFlipsCrossPolarization) {
  const int L = 7;
  for (int m = 1; m <= 3; ++m) {
    const auto up = translation_block(m, 1.7, L);
    const auto dn = translation_block(-m, 1.7, L);
    const int n = up.size() / 2;
    EXPECT_EQ(up.entries.topLeftCorner(n, n), dn.entries.topLeftCorner(n, n));
    EXPECT_EQ(up.entries.bottomRightCorner(n, n), dn.entries.bottomRightCorner(n, n));
    EXPECT_EQ(up.entries.topRightCorner(n, n), -dn.entries.topRightCorner(n, n));
    EXPECT_EQ(up.entries.bottomLeftCorner(n, n), -dn.entries.bottomLeftCorner(n, n));
  }
}

TEST(Translation, MConservationByBlocks) {
  // The full operator over (l, m, P) is the direct sum of the m blocks; every
  // m != m' entry is absent by construction.
  const int L = 3;
  int dim = 0;
  for (int m = -L; m <= L; ++m) dim += translation_block(m, 1.0, L).size();
  EXPECT_EQ(dim, 2 * (L * (L + 2)));
}

TEST(Translation, StoredEntriesFiniteForLargeSeparation) {
  for (double q : {1e2, 1e3, 1e4}) {
    const auto b = translation_block(2, q, 20);
    EXPECT_TRUE(b.entries.allFinite()) << q;
    EXPECT_DOUBLE_EQ(b.scaling_exponent, -q);
    for (double s : b.log_scale) EXPECT_TRUE(std::isfinite(s));
  }
}

TEST(Translation, DipoleLimits) {
  // Static dipole field: couplings ~ q^{-3}.
  const auto c = dipole_translation_limit(1e-4);
  EXPECT_NEAR(c.a0 * 1e-12, 3.0, 1e-3);
  EXPECT_NEAR(c.a1 * 1e-12, -1.5, 1e-3);
  // Round trip (two crossings) decays as e^{-2q}.
  const auto a = dipole_translation_limit(20.0);
  const auto b = dipole_translation_limit(21.0);
  const double rate = std::log((a.a0 * a.a0) / (b.a0 * b.a0));
  EXPECT_GT(rate, 2.0);
  EXPECT_LT(rate, 2.3);
}
