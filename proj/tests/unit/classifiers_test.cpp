#include <gtest/gtest.h>

#include <cmath>

#include "spdset/classifiers.hpp"
#include "test_support.hpp"

namespace spdset {
namespace {

using testing::random_spd;

constexpr MetricKind kMetrics[] = {MetricKind::AIRM, MetricKind::Stein, MetricKind::Jeffrey, MetricKind::LEM};

// exp(sign·M + noise): two clusters that are linearly separable in the log domain.
std::vector<LabeledSample> two_clusters(Rng& rng, const Matrix& m, int per_class, double noise) {
  std::vector<LabeledSample> out;
  for (int k = 0; k < per_class; ++k) {
    for (int cls = 0; cls < 2; ++cls) {
      const double sign = cls == 0 ? 1.0 : -1.0;
      const Matrix a = sign * m + testing::random_symmetric(rng, m.rows(), noise);
      out.push_back({sym_exp(SymMatrix(a)), cls});
    }
  }
  return out;
}

TEST(NearestNeighbor, ExactMatch) {
  Rng rng(1);
  std::vector<LabeledSample> train;
  for (int i = 0; i < 5; ++i) train.push_back({random_spd(rng, 4), i});
  for (MetricKind m : kMetrics) {
    const NeighborMatch hit = nearest_neighbor(train, train[3].rep, m);
    EXPECT_EQ(hit.label, 3);
    EXPECT_EQ(hit.index, 3u);
    EXPECT_NEAR(hit.distance, 0.0, 1e-6);
  }
}

TEST(NearestNeighbor, CloserSecondSample) {
  Vector d(2);
  d << 1.0, 1.0;
  const SpdMatrix a = SpdMatrix::from(SymMatrix::diagonal(d));
  d << 4.0, 4.0;
  const SpdMatrix b = SpdMatrix::from(SymMatrix::diagonal(d));
  d << 3.0, 3.0;
  const SpdMatrix q = SpdMatrix::from(SymMatrix::diagonal(d));
  const std::vector<LabeledSample> train{{a, 10}, {b, 20}};
  for (MetricKind m : kMetrics) EXPECT_EQ(nn_classify(train, q, m), 20) << to_string(m);
}

TEST(NearestNeighbor, TiesGoToFirstIndex) {
  Vector d(2);
  d << 2.0, 2.0;
  const SpdMatrix x = SpdMatrix::from(SymMatrix::diagonal(d));
  const std::vector<LabeledSample> train{{x, 4}, {x, 1}};
  EXPECT_EQ(nearest_neighbor(train, SpdMatrix::identity(2), MetricKind::LEM).index, 0u);
}

TEST(NearestNeighbor, MatchesExhaustiveSearch) {
  Rng rng(2);
  std::vector<LabeledSample> train;
  for (int i = 0; i < 12; ++i) train.push_back({random_spd(rng, 4), i % 3});
  for (int q = 0; q < 50; ++q) {
    const SpdMatrix query = random_spd(rng, 4);
    for (MetricKind m : kMetrics) {
      std::size_t best = 0;
      double best_d = distance(m, train[0].rep, query);
      for (std::size_t i = 1; i < train.size(); ++i) {
        const double dist = distance(m, train[i].rep, query);
        if (dist < best_d) {
          best_d = dist;
          best = i;
        }
      }
      const NeighborMatch hit = nearest_neighbor(train, query, m);
      EXPECT_EQ(hit.index, best);
      EXPECT_EQ(hit.label, train[best].label);
    }
  }
}

TEST(NearestNeighbor, EmptyTrainingThrows) {
  EXPECT_THROW(nearest_neighbor({}, SpdMatrix::identity(2), MetricKind::LEM), Error);
}

TEST(Svm, SeparableClustersFitPerfectly) {
  Rng rng(3);
  const Matrix m = testing::random_symmetric(rng, 4);
  const auto train = two_clusters(rng, m, 8, 0.2);
  const SvmModel model = svm_train(train, 10.0);
  for (const auto& s : train) EXPECT_EQ(svm_predict(model, s.rep), s.label);
  const auto test = two_clusters(rng, m, 5, 0.2);
  for (const auto& s : test) EXPECT_EQ(svm_predict(model, s.rep), s.label);
}

TEST(Svm, SingleSamplePerClass) {
  Rng rng(4);
  std::vector<LabeledSample> train;
  for (int cls = 0; cls < 4; ++cls) train.push_back({random_spd(rng, 3), cls});
  // Near-hard margin: four points in the 6-dim log space are always separable.
  const SvmModel model = svm_train(train, 100.0);
  for (const auto& s : train) EXPECT_EQ(svm_predict(model, s.rep), s.label);
}

TEST(Svm, DualFeasibilityAndKkt) {
  Rng rng(5);
  const Matrix m = testing::random_symmetric(rng, 3);
  const auto train = two_clusters(rng, m, 10, 1.5);
  for (double c : {0.1, 1.0, 100.0}) {
    const SvmModel model = svm_train(train, c);
    const Index n = static_cast<Index>(train.size());
    Matrix k(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        k(i, j) = (spd_log(train[static_cast<std::size_t>(i)].rep).matrix() *
                   spd_log(train[static_cast<std::size_t>(j)].rep).matrix()).trace();
    for (const BinarySvm& svm : model.machines) {
      EXPECT_GE(svm.alpha.minCoeff(), -1e-9);
      EXPECT_LE(svm.alpha.maxCoeff(), c + 1e-9);
      EXPECT_LT(std::abs(svm.alpha.dot(svm.y)), 1e-6);
      // Maximal violating pair from the gradient of ½αᵀQα − eᵀα.
      const Vector grad = svm.y.asDiagonal() * k * svm.y.asDiagonal() * svm.alpha - Vector::Ones(n);
      double up = -1e300, low = 1e300;
      for (Index t = 0; t < n; ++t) {
        const double v = -svm.y(t) * grad(t);
        const bool is_up = (svm.y(t) > 0 && svm.alpha(t) < c) || (svm.y(t) < 0 && svm.alpha(t) > 0);
        const bool is_low = (svm.y(t) > 0 && svm.alpha(t) > 0) || (svm.y(t) < 0 && svm.alpha(t) < c);
        if (is_up) up = std::max(up, v);
        if (is_low) low = std::min(low, v);
      }
      EXPECT_LE(up - low, 1e-3 * (1.0 + 1e-6));
    }
  }
}

TEST(Svm, MidpointTieGoesToSmallerClass) {
  Rng rng(6);
  const Matrix m = testing::random_symmetric(rng, 3);
  const std::vector<LabeledSample> train{{sym_exp(SymMatrix(m)), 7}, {sym_exp(SymMatrix(Matrix(-m))), 3}};
  const SvmModel model = svm_train(train, 1.0);
  const Vector values = model.decision_values(SpdMatrix::identity(3));
  EXPECT_NEAR(values(0), values(1), 1e-12);
  EXPECT_EQ(svm_predict(model, SpdMatrix::identity(3)), 3);
  EXPECT_EQ(svm_predict(model, train[0].rep), 7);
}

TEST(Svm, TrainingOrderDoesNotChangePredictions) {
  Rng rng(7);
  const Matrix m = testing::random_symmetric(rng, 3);
  auto train = two_clusters(rng, m, 6, 1.0);
  const SvmModel a = svm_train(train, 1.0);
  std::vector<std::size_t> order(train.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  rng.shuffle(order);
  std::vector<LabeledSample> shuffled;
  for (std::size_t i : order) shuffled.push_back(train[i]);
  const SvmModel b = svm_train(shuffled, 1.0);
  for (int q = 0; q < 40; ++q) {
    const SpdMatrix query = sym_exp(SymMatrix(testing::random_symmetric(rng, 3, 1.5)));
    const Vector va = a.decision_values(query);
    if (std::abs(va(0) - va(1)) < 1e-3) continue;
    EXPECT_EQ(svm_predict(a, query), svm_predict(b, query));
  }
}

TEST(Svm, NeedsTwoClasses) {
  Rng rng(8);
  const std::vector<LabeledSample> train{{random_spd(rng, 2), 1}, {random_spd(rng, 2), 1}};
  EXPECT_THROW(svm_train(train), Error);
}

TEST(Svm, BinarySolverRejectsBadInput) {
  EXPECT_THROW(solve_binary_svm(Matrix::Identity(2, 2), Vector::Ones(3), 1.0), Error);
  EXPECT_THROW(solve_binary_svm(Matrix::Identity(2, 2), Vector::Ones(2), 0.0), Error);
}

}  // namespace
}  // namespace spdset
