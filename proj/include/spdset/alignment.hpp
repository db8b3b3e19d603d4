#pragma once

// Learning the per-order mixing weights of the sub-image-set kernels by
// kernel target alignment, plus the top-k binarization used at inference.

#include <span>
#include <vector>

#include "spdset/spd_kernels.hpp"

namespace spdset {

struct KernelWeights {
  std::vector<int> orders;
  /// Unit-norm alignment solution, one entry per order.
  Vector raw;
  /// 1 for the orders kept at inference, 0 otherwise.
  std::vector<int> mask;

  /// Equal raw weights and an all-ones mask.
  static KernelWeights uniform(std::vector<int> orders);

  /// Weights actually applied when summing the per-order Grams (the mask).
  Vector applied() const;
  int retained() const;
};

/// Per-order local Grams of one image set.
struct OrderedGrams {
  std::vector<int> orders;
  std::vector<GramMatrix> grams;
};

struct AlignmentProblem {
  std::vector<int> orders;
  /// [K_r]_{ij} = Tr(C_r^i C_r^j) over the training sets.
  std::vector<GramMatrix> local_kernels;
  /// Y·Yᵀ for the one-hot label matrix Y.
  GramMatrix target;
};

/// ⟨K, K_T⟩_F / sqrt(⟨K, K⟩_F ⟨K_T, K_T⟩_F).
double alignment(const Matrix& k, const Matrix& target);
double alignment(const GramMatrix& k, const GramMatrix& target);

AlignmentProblem build_problem(std::span<const OrderedGrams> local_grams_per_set,
                               std::span<const int> labels);

/// Closed-form maximizer Ω⁻¹β / ‖Ω⁻¹β‖ with β_r = Tr(K̂_r K_T) and
/// Ω_rs = Tr(K̂_r K̂_s), K̂ the centered local kernels. The returned mask is all ones.
KernelWeights solve_weights(const AlignmentProblem& problem);

/// Keeps the k largest |raw| entries (ties go to the lower order index).
KernelWeights binarize_weights(const KernelWeights& w, int k);

}  // namespace spdset
