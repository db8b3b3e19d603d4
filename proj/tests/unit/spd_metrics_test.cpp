#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "spdset/spd_metrics.hpp"
#include "test_support.hpp"

namespace spdset {
namespace {

using testing::random_spd;

constexpr double kE = std::numbers::e;

SpdMatrix diag(std::initializer_list<double> values) {
  Vector d(static_cast<Index>(values.size()));
  Index i = 0;
  for (double v : values) d(i++) = v;
  return SpdMatrix::from(SymMatrix::diagonal(d));
}

constexpr MetricKind kAll[] = {MetricKind::AIRM, MetricKind::Stein, MetricKind::Jeffrey, MetricKind::LEM};

TEST(Metrics, SelfDistanceIsZero) {
  Rng rng(1);
  const SpdMatrix x = random_spd(rng, 6);
  for (MetricKind m : kAll) EXPECT_NEAR(distance(m, x, x), 0.0, 1e-6) << to_string(m);
}

TEST(Metrics, SymmetricInArguments) {
  Rng rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const SpdMatrix x = random_spd(rng, 5);
    const SpdMatrix y = random_spd(rng, 5);
    for (MetricKind m : kAll) {
      EXPECT_NEAR(distance(m, x, y), distance(m, y, x), 1e-9 * std::max(1.0, distance(m, x, y)));
    }
  }
}

TEST(Metrics, DimensionMismatchThrows) {
  for (MetricKind m : kAll) {
    try {
      distance(m, SpdMatrix::identity(2), SpdMatrix::identity(3));
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::DimMismatch);
    }
  }
}

TEST(Metrics, ParseNames) {
  EXPECT_EQ(parse_metric("airm"), MetricKind::AIRM);
  EXPECT_EQ(parse_metric("lem"), MetricKind::LEM);
  EXPECT_FALSE(parse_metric("euclid").has_value());
}

TEST(Airm, DiagonalExample) {
  EXPECT_NEAR(airm_dist(SpdMatrix::identity(2), diag({kE * kE, 1.0 / (kE * kE)})), std::sqrt(8.0), 1e-12);
}

TEST(Airm, AffineInvariance) {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = testing::random_int(rng, 2, 8);
    const SpdMatrix x = random_spd(rng, n);
    const SpdMatrix y = random_spd(rng, n);
    Matrix a = testing::random_gaussian(rng, n, n) + 2.0 * Matrix::Identity(n, n);
    while (std::abs(a.determinant()) < 1e-2) a += Matrix::Identity(n, n);
    const SpdMatrix ax = SpdMatrix::from(Matrix(a * x.matrix() * a.transpose()));
    const SpdMatrix ay = SpdMatrix::from(Matrix(a * y.matrix() * a.transpose()));
    EXPECT_NEAR(airm_dist(ax, ay), airm_dist(x, y), 1e-7);
  }
}

TEST(Airm, InversionInvariance) {
  Rng rng(4);
  const SpdMatrix x = random_spd(rng, 5);
  const SpdMatrix y = random_spd(rng, 5);
  const SpdMatrix xi = SpdMatrix::from(Matrix(x.matrix().inverse()));
  const SpdMatrix yi = SpdMatrix::from(Matrix(y.matrix().inverse()));
  EXPECT_NEAR(airm_dist(xi, yi), airm_dist(x, y), 1e-8);
}

TEST(Stein, ScalarExample) {
  EXPECT_NEAR(stein_div(diag({1.0}), diag({4.0})), std::sqrt(std::log(1.25)), 1e-12);
  EXPECT_NEAR(stein_div(diag({1.0}), diag({4.0})), 0.472381, 1e-6);
}

TEST(Stein, MatchesDeterminantFormula) {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const SpdMatrix x = random_spd(rng, 4);
    const SpdMatrix y = random_spd(rng, 4);
    const double expect = std::sqrt(std::log(((x.matrix() + y.matrix()) / 2.0).determinant()) -
                                    0.5 * std::log(x.matrix().determinant() * y.matrix().determinant()));
    EXPECT_NEAR(stein_div(x, y), expect, 1e-9);
  }
}

TEST(Jeffrey, ScalarExample) {
  EXPECT_NEAR(jeffrey_div(diag({1.0}), diag({2.0})), 0.5, 1e-12);
}

TEST(Jeffrey, MatchesExplicitInverse) {
  Rng rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = testing::random_int(rng, 2, 8);
    const SpdMatrix x = random_spd(rng, n);
    const SpdMatrix y = random_spd(rng, n);
    const double sq = 0.5 * (x.matrix().inverse() * y.matrix()).trace() +
                      0.5 * (y.matrix().inverse() * x.matrix()).trace() - static_cast<double>(n);
    EXPECT_NEAR(jeffrey_div(x, y), std::sqrt(sq), 1e-9);
  }
}

TEST(Lem, DiagonalExample) {
  EXPECT_NEAR(lem_dist(SpdMatrix::identity(2), diag({kE * kE, 1.0})), 2.0, 1e-12);
}

TEST(Lem, TriangleInequality) {
  Rng rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    const Index n = testing::random_int(rng, 2, 5);
    const SpdMatrix x = random_spd(rng, n);
    const SpdMatrix y = random_spd(rng, n);
    const SpdMatrix z = random_spd(rng, n);
    EXPECT_LE(lem_dist(x, z), lem_dist(x, y) + lem_dist(y, z) + 1e-9);
  }
}

TEST(Airm, TriangleInequality) {
  Rng rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const SpdMatrix x = random_spd(rng, 3);
    const SpdMatrix y = random_spd(rng, 3);
    const SpdMatrix z = random_spd(rng, 3);
    EXPECT_LE(airm_dist(x, z), airm_dist(x, y) + airm_dist(y, z) + 1e-9);
  }
}

TEST(LogDet, SumOfLogEigenvalues) {
  Rng rng(9);
  const SpdMatrix x = random_spd(rng, 6);
  EXPECT_NEAR(log_det(x.eigen()), std::log(x.matrix().determinant()), 1e-10);
}

}  // namespace
}  // namespace spdset
