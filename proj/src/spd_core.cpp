#include "spdset/spd_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace spdset {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::NumericalError: return "NumericalError";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::DegenerateSet: return "DegenerateSet";
    case ErrorCode::DegenerateRepresentation: return "DegenerateRepresentation";
    case ErrorCode::DegenerateAlignment: return "DegenerateAlignment";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::KernelNotPSD: return "KernelNotPSD";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::InsufficientSets: return "InsufficientSets";
    case ErrorCode::FrameDecodeError: return "FrameDecodeError";
    case ErrorCode::InvalidResult: return "InvalidResult";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

bool Error::is_numerical() const noexcept {
  switch (code_) {
    case ErrorCode::NotPositiveDefinite:
    case ErrorCode::Overflow:
    case ErrorCode::NumericalError:
    case ErrorCode::DegenerateRepresentation:
    case ErrorCode::DegenerateAlignment:
    case ErrorCode::IllConditioned:
    case ErrorCode::KernelNotPSD:
    case ErrorCode::ConvergenceFailure:
      return true;
    default:
      return false;
  }
}

SymMatrix::SymMatrix(const Matrix& a) {
  if (a.rows() < 1 || a.rows() != a.cols()) {
    throw Error(ErrorCode::InvalidInput,
                "symmetric matrix must be square and nonempty, got " + std::to_string(a.rows()) +
                    "x" + std::to_string(a.cols()));
  }
  m_ = (a + a.transpose()) * 0.5;
}

SymMatrix SymMatrix::zeros(Index n) { return SymMatrix(Matrix::Zero(n, n)); }
SymMatrix SymMatrix::identity(Index n) { return SymMatrix(Matrix::Identity(n, n)); }
SymMatrix SymMatrix::diagonal(const Vector& d) { return SymMatrix(Matrix(d.asDiagonal())); }

EigenPair sym_eig(const SymMatrix& a) {
  if (!a.matrix().allFinite()) {
    throw Error(ErrorCode::InvalidInput, "matrix has non-finite entries");
  }
  const Index n = a.dim();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix(), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::NumericalError, "symmetric eigensolver did not converge");
  }
  // Eigen returns ascending order.
  EigenPair out{Matrix(n, n), Vector(n)};
  for (Index k = 0; k < n; ++k) {
    const Index src = n - 1 - k;
    out.values(k) = solver.eigenvalues()(src);
    auto col = solver.eigenvectors().col(src);
    double sign = 1.0;
    for (Index i = 0; i < n; ++i) {
      if (std::abs(col(i)) > 1e-12) {
        sign = col(i) < 0.0 ? -1.0 : 1.0;
        break;
      }
    }
    out.vectors.col(k) = sign * col;
  }
  return out;
}

SpdMatrix SpdMatrix::from(const SymMatrix& s, EigenFloorPolicy policy) {
  if (policy == EigenFloorPolicy::Clamp) return from_clamped(s, kClampRelativeFloor);
  EigenPair eig = sym_eig(s);
  const double largest = eig.values(0);
  const double smallest = eig.values(eig.values.size() - 1);
  if (!(largest > 0.0)) {
    throw Error(ErrorCode::NotPositiveDefinite,
                "largest eigenvalue " + std::to_string(largest) + " is not positive");
  }
  const double floor = kRejectRelativeFloor * largest;
  if (!(smallest > floor)) {
    throw Error(ErrorCode::NotPositiveDefinite,
                "smallest eigenvalue " + std::to_string(smallest) + " <= " + std::to_string(floor));
  }
  return SpdMatrix(s, std::move(eig), floor);
}

SpdMatrix SpdMatrix::from_clamped(const SymMatrix& s, double relative_floor) {
  EigenPair eig = sym_eig(s);
  const double largest = eig.values(0);
  if (!(largest > 0.0)) {
    throw Error(ErrorCode::NotPositiveDefinite,
                "largest eigenvalue " + std::to_string(largest) + " is not positive");
  }
  const double floor = relative_floor * largest;
  if (eig.values(eig.values.size() - 1) >= floor) return SpdMatrix(s, std::move(eig), floor);
  for (Index i = 0; i < eig.values.size(); ++i) eig.values(i) = std::max(eig.values(i), floor);
  Matrix rebuilt = spectral_map(eig, [](double v) { return v; });
  return SpdMatrix(SymMatrix(std::move(rebuilt), SymMatrix::Trusted{}), std::move(eig), floor);
}

SpdMatrix SpdMatrix::from_spectrum(EigenPair eig) {
  const Index n = eig.values.size();
  if (n < 1 || eig.vectors.rows() != n || eig.vectors.cols() != n) {
    throw Error(ErrorCode::InvalidInput, "spectrum and basis sizes disagree");
  }
  for (Index i = 0; i < n; ++i) {
    if (!(eig.values(i) > 0.0) || !std::isfinite(eig.values(i))) {
      throw Error(ErrorCode::NotPositiveDefinite,
                  "eigenvalue " + std::to_string(eig.values(i)) + " is not a positive finite value");
    }
  }
  Matrix m = spectral_map(eig, [](double v) { return v; });
  return SpdMatrix(SymMatrix(std::move(m), SymMatrix::Trusted{}), std::move(eig), 0.0);
}

SpdMatrix SpdMatrix::identity(Index n) {
  return from_spectrum(EigenPair{Matrix::Identity(n, n), Vector::Ones(n)});
}

SymMatrix spd_log(const SpdMatrix& x) {
  return SymMatrix(spectral_map(x.eigen(), [](double v) { return std::log(v); }));
}

SpdMatrix sym_exp(const SymMatrix& a) {
  EigenPair eig = sym_eig(a);
  if (eig.values(0) > 700.0) {
    throw Error(ErrorCode::Overflow,
                "largest eigenvalue " + std::to_string(eig.values(0)) + " exceeds 700");
  }
  for (Index i = 0; i < eig.values.size(); ++i) eig.values(i) = std::exp(eig.values(i));
  return SpdMatrix::from_spectrum(std::move(eig));
}

Matrix double_center(const Matrix& a) {
  const Vector row_means = a.rowwise().mean();
  const Eigen::RowVectorXd col_means = a.colwise().mean();
  const double grand = a.mean();
  Matrix out = a;
  out.colwise() -= row_means;
  out.rowwise() -= col_means;
  out.array() += grand;
  return out;
}

SpdMatrix mean_centralize(const SpdMatrix& x) {
  return sym_exp(SymMatrix(double_center(spd_log(x).matrix())));
}

}  // namespace spdset
