#pragma once

// Nearest-neighbour classification under the SPD dissimilarities and a
// one-vs-all soft-margin SVM over the Log-Euclidean kernel.

#include <span>
#include <vector>

#include "spdset/spd_metrics.hpp"

namespace spdset {

struct LabeledSample {
  SpdMatrix rep;
  int label = 0;
};

struct NeighborMatch {
  int label = 0;
  std::size_t index = 0;
  double distance = 0.0;
};

/// Argmin over the training set; ties go to the smallest training index.
NeighborMatch nearest_neighbor(std::span<const LabeledSample> train, const SpdMatrix& query,
                               MetricKind metric);
int nn_classify(std::span<const LabeledSample> train, const SpdMatrix& query, MetricKind metric);

struct SvmOptions {
  /// Stopping tolerance on the maximal KKT violation.
  double tolerance = 1e-3;
  long max_iterations = 10'000'000;
  /// Relative tolerance for the Gram PSD check.
  double psd_tolerance = 1e-8;
};

/// Solution of one binary soft-margin dual over a precomputed Gram.
struct BinarySvm {
  Vector alpha;
  /// ±1 targets.
  Vector y;
  double bias = 0.0;
  long iterations = 0;
  /// Maximal KKT violation m(α) − M(α) at termination.
  double kkt_gap = 0.0;

  /// Σ α_i y_i k_i + b for kernel values k_i against the training samples.
  double decision(const Vector& kernel_column) const;
};

/// Pairwise (two-variable) dual coordinate ascent with second-order working-set
/// selection. Throws ConvergenceFailure past the iteration cap.
BinarySvm solve_binary_svm(const Matrix& gram, const Vector& y, double c, const SvmOptions& opts = {});

struct SvmModel {
  /// Sorted distinct labels; machines[i] separates classes[i] from the rest.
  std::vector<int> classes;
  std::vector<BinarySvm> machines;
  /// log of every training representation, for kernel evaluation at prediction.
  std::vector<Matrix> train_logs;
  double c = 1.0;

  /// One decision value per entry of `classes`.
  Vector decision_values(const SpdMatrix& query) const;
};

SvmModel svm_train(std::span<const LabeledSample> train, double c = 1.0, const SvmOptions& opts = {});

/// Argmax decision value; values equal up to 1e-12 relative are ties, won by the smaller class id.
int svm_predict(const SvmModel& model, const SpdMatrix& query);

}  // namespace spdset
