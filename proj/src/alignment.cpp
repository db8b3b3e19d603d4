#include "spdset/alignment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace spdset {
namespace {

double frobenius_dot(const Matrix& a, const Matrix& b) { return a.cwiseProduct(b).sum(); }

}  // namespace

KernelWeights KernelWeights::uniform(std::vector<int> orders) {
  KernelWeights w;
  const auto n = static_cast<Index>(orders.size());
  w.raw = Vector::Constant(n, n > 0 ? 1.0 / std::sqrt(static_cast<double>(n)) : 0.0);
  w.mask.assign(orders.size(), 1);
  w.orders = std::move(orders);
  return w;
}

Vector KernelWeights::applied() const {
  Vector out(static_cast<Index>(mask.size()));
  for (std::size_t i = 0; i < mask.size(); ++i) out(static_cast<Index>(i)) = mask[i];
  return out;
}

int KernelWeights::retained() const { return std::accumulate(mask.begin(), mask.end(), 0); }

double alignment(const Matrix& k, const Matrix& target) {
  if (k.rows() != target.rows() || k.cols() != target.cols()) {
    throw Error(ErrorCode::DimMismatch, "alignment operands differ in size");
  }
  const double kk = frobenius_dot(k, k);
  const double tt = frobenius_dot(target, target);
  if (!(kk > 0.0) || !(tt > 0.0)) {
    throw Error(ErrorCode::DegenerateAlignment, "alignment operand has zero Frobenius norm");
  }
  return frobenius_dot(k, target) / std::sqrt(kk * tt);
}

double alignment(const GramMatrix& k, const GramMatrix& target) {
  return alignment(k.matrix(), target.matrix());
}

AlignmentProblem build_problem(std::span<const OrderedGrams> local_grams_per_set,
                               std::span<const int> labels) {
  if (labels.empty() || local_grams_per_set.size() != labels.size()) {
    throw Error(ErrorCode::InvalidInput, "need one label per training set");
  }
  const OrderedGrams& first = local_grams_per_set.front();
  if (first.orders.empty() || first.grams.size() != first.orders.size()) {
    throw Error(ErrorCode::InvalidInput, "training set 0 has no per-order Grams");
  }
  for (std::size_t i = 0; i < local_grams_per_set.size(); ++i) {
    const OrderedGrams& g = local_grams_per_set[i];
    if (g.orders != first.orders || g.grams.size() != first.grams.size()) {
      throw Error(ErrorCode::InvalidInput,
                  "training set " + std::to_string(i) + " uses a different order list");
    }
  }

  const Index m = static_cast<Index>(labels.size());
  AlignmentProblem p;
  p.orders = first.orders;
  for (std::size_t r = 0; r < first.orders.size(); ++r) {
    Matrix k(m, m);
    for (Index i = 0; i < m; ++i) {
      for (Index j = i; j < m; ++j) {
        const Matrix& ci = local_grams_per_set[i].grams[r].matrix();
        const Matrix& cj = local_grams_per_set[j].grams[r].matrix();
        if (ci.rows() != cj.rows()) {
          throw Error(ErrorCode::DimMismatch, "local Grams of different sizes");
        }
        k(i, j) = k(j, i) = frobenius_dot(ci, cj);
      }
    }
    p.local_kernels.emplace_back(std::move(k));
  }

  Matrix target(m, m);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j) target(i, j) = labels[i] == labels[j] ? 1.0 : 0.0;
  p.target = GramMatrix(std::move(target));
  return p;
}

KernelWeights solve_weights(const AlignmentProblem& problem) {
  const auto count = static_cast<Index>(problem.local_kernels.size());
  if (count == 0) throw Error(ErrorCode::InvalidInput, "alignment problem has no local kernels");

  std::vector<Matrix> centered;
  centered.reserve(problem.local_kernels.size());
  for (const GramMatrix& k : problem.local_kernels) centered.push_back(center_gram(k).matrix());

  Vector beta(count);
  Matrix omega(count, count);
  for (Index r = 0; r < count; ++r) {
    beta(r) = frobenius_dot(centered[r], problem.target.matrix());
    for (Index s = r; s < count; ++s) omega(r, s) = omega(s, r) = frobenius_dot(centered[r], centered[s]);
  }

  const double trace = omega.trace();
  if (!(trace > 0.0) || !std::isfinite(trace)) {
    throw Error(ErrorCode::IllConditioned, "centered local kernels are all zero");
  }
  omega.diagonal().array() += 1e-10 * trace / static_cast<double>(count);

  Eigen::LDLT<Matrix> ldlt(omega);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
    throw Error(ErrorCode::IllConditioned, "alignment Gram is not positive definite after ridge");
  }
  Vector solution = ldlt.solve(beta);
  const double norm = solution.norm();
  if (!std::isfinite(norm)) {
    throw Error(ErrorCode::IllConditioned, "alignment solve produced non-finite weights");
  }
  if (!(norm > 0.0)) {
    throw Error(ErrorCode::DegenerateAlignment, "no local kernel correlates with the labels");
  }

  KernelWeights w;
  w.orders = problem.orders;
  w.raw = solution / norm;
  w.mask.assign(problem.orders.size(), 1);
  return w;
}

KernelWeights binarize_weights(const KernelWeights& w, int k) {
  const int n = static_cast<int>(w.raw.size());
  if (k < 1 || k > n) {
    throw Error(ErrorCode::InvalidInput,
                "cannot keep " + std::to_string(k) + " of " + std::to_string(n) + " orders");
  }
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return std::abs(w.raw(a)) > std::abs(w.raw(b)); });
  KernelWeights out = w;
  out.mask.assign(n, 0);
  for (int i = 0; i < k; ++i) out.mask[idx[i]] = 1;
  return out;
}

}  // namespace spdset
