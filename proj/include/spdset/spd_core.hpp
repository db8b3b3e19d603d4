#pragma once

// Dense symmetric / SPD matrix primitives: eigendecomposition, principal
// matrix logarithm and exponential, and log-domain mean centralization.

#include <Eigen/Dense>

#include "spdset/error.hpp"

namespace spdset {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Real symmetric matrix. The input is symmetrized as (A + Aᵀ)/2 on
/// construction, so small asymmetries from upstream products are absorbed.
class SymMatrix {
 public:
  explicit SymMatrix(const Matrix& a);

  static SymMatrix zeros(Index n);
  static SymMatrix identity(Index n);
  static SymMatrix diagonal(const Vector& d);

  Index dim() const noexcept { return m_.rows(); }
  const Matrix& matrix() const noexcept { return m_; }
  double operator()(Index i, Index j) const { return m_(i, j); }
  double frobenius_norm() const { return m_.norm(); }

 private:
  struct Trusted {};
  SymMatrix(Matrix m, Trusted) : m_(std::move(m)) {}
  friend class SpdMatrix;

  Matrix m_;
};

/// Eigenvalues sorted descending; the first nonzero component of every
/// eigenvector is nonnegative.
struct EigenPair {
  Matrix vectors;
  Vector values;
};

EigenPair sym_eig(const SymMatrix& a);

/// Rebuilds U·Diag(f(e))·Uᵀ from a decomposition.
template <typename F>
Matrix spectral_map(const EigenPair& eig, F&& f) {
  Vector mapped(eig.values.size());
  for (Index i = 0; i < eig.values.size(); ++i) mapped(i) = f(eig.values(i));
  Matrix out = eig.vectors * mapped.asDiagonal() * eig.vectors.transpose();
  return (out + out.transpose()) * 0.5;
}

enum class EigenFloorPolicy {
  /// Fail with NotPositiveDefinite when λ_min ≤ 1e-12·λ_max. Default for user input.
  Reject,
  /// Raise every eigenvalue to at least 1e-10·λ_max. Default for internally built matrices.
  Clamp,
};

inline constexpr double kRejectRelativeFloor = 1e-12;
inline constexpr double kClampRelativeFloor = 1e-10;

/// Symmetric positive-definite matrix. Validation needs the spectrum, so the
/// decomposition is kept alongside the entries and reused by log/metrics.
class SpdMatrix {
 public:
  static SpdMatrix from(const SymMatrix& s, EigenFloorPolicy policy = EigenFloorPolicy::Reject);
  static SpdMatrix from(const Matrix& m, EigenFloorPolicy policy = EigenFloorPolicy::Reject) {
    return from(SymMatrix(m), policy);
  }
  /// Raises eigenvalues below relative_floor·λ_max to that floor. The input is
  /// kept bit-for-bit when nothing needs clamping.
  static SpdMatrix from_clamped(const SymMatrix& s, double relative_floor);
  /// Builds U·Diag(values)·Uᵀ from an already orthonormal basis. Every value must be > 0.
  static SpdMatrix from_spectrum(EigenPair eig);

  static SpdMatrix identity(Index n);

  Index dim() const noexcept { return sym_.dim(); }
  const SymMatrix& sym() const noexcept { return sym_; }
  const Matrix& matrix() const noexcept { return sym_.matrix(); }
  const EigenPair& eigen() const noexcept { return eig_; }
  /// Absolute eigenvalue floor that was enforced at construction.
  double eig_floor() const noexcept { return eig_floor_; }

 private:
  SpdMatrix(SymMatrix s, EigenPair e, double floor)
      : sym_(std::move(s)), eig_(std::move(e)), eig_floor_(floor) {}

  SymMatrix sym_;
  EigenPair eig_;
  double eig_floor_;
};

/// Principal matrix logarithm, log(X) = U·Diag(log e_i)·Uᵀ.
SymMatrix spd_log(const SpdMatrix& x);

/// Matrix exponential of a symmetric matrix. Throws Overflow when the largest
/// eigenvalue exceeds 700.
SpdMatrix sym_exp(const SymMatrix& a);

/// A − rowmeans − colmeans + grandmean. Output rows and columns sum to zero.
Matrix double_center(const Matrix& a);

/// exp(double_center(log X)): removes the log-domain row/column means.
SpdMatrix mean_centralize(const SpdMatrix& x);

}  // namespace spdset
