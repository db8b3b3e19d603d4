#include "spdset/spd_metrics.hpp"

#include <cmath>
#include <string>

namespace spdset {
namespace {

void require_same_dim(const SpdMatrix& x, const SpdMatrix& y) {
  if (x.dim() != y.dim()) {
    throw Error(ErrorCode::DimMismatch, "operands have dims " + std::to_string(x.dim()) +
                                            " and " + std::to_string(y.dim()));
  }
}

// Squared divergences can come out slightly negative from cancellation.
double checked_sqrt(double squared, const char* what) {
  if (squared >= 0.0) return std::sqrt(squared);
  if (squared > -1e-10) return 0.0;
  throw Error(ErrorCode::NumericalError,
              std::string(what) + " squared value is negative: " + std::to_string(squared));
}

// Tr(X⁻¹Y) using X = U·Diag(e)·Uᵀ, i.e. Σ_i (u_iᵀ Y u_i) / e_i.
double trace_inv_product(const SpdMatrix& x, const SpdMatrix& y) {
  const Matrix& u = x.eigen().vectors;
  const Vector& e = x.eigen().values;
  double sum = 0.0;
  for (Index i = 0; i < e.size(); ++i) {
    sum += u.col(i).dot(y.matrix() * u.col(i)) / e(i);
  }
  return sum;
}

}  // namespace

const char* to_string(MetricKind kind) noexcept {
  switch (kind) {
    case MetricKind::AIRM: return "airm";
    case MetricKind::Stein: return "stein";
    case MetricKind::Jeffrey: return "jeffrey";
    case MetricKind::LEM: return "lem";
  }
  return "unknown";
}

std::optional<MetricKind> parse_metric(std::string_view name) {
  if (name == "airm") return MetricKind::AIRM;
  if (name == "stein") return MetricKind::Stein;
  if (name == "jeffrey") return MetricKind::Jeffrey;
  if (name == "lem") return MetricKind::LEM;
  return std::nullopt;
}

double log_det(const EigenPair& eig) { return eig.values.array().log().sum(); }

double airm_dist(const SpdMatrix& x, const SpdMatrix& y) {
  require_same_dim(x, y);
  const Matrix inv_sqrt = spectral_map(x.eigen(), [](double v) { return 1.0 / std::sqrt(v); });
  const EigenPair inner = sym_eig(SymMatrix(inv_sqrt * y.matrix() * inv_sqrt));
  double sum = 0.0;
  for (Index i = 0; i < inner.values.size(); ++i) {
    const double v = inner.values(i);
    if (!(v > 0.0)) {
      throw Error(ErrorCode::NumericalError, "whitened matrix lost positive definiteness");
    }
    const double l = std::log(v);
    sum += l * l;
  }
  return std::sqrt(sum);
}

double stein_div(const SpdMatrix& x, const SpdMatrix& y) {
  require_same_dim(x, y);
  const EigenPair mid = sym_eig(SymMatrix((x.matrix() + y.matrix()) * 0.5));
  for (Index i = 0; i < mid.values.size(); ++i) {
    if (!(mid.values(i) > 0.0)) {
      throw Error(ErrorCode::NumericalError, "midpoint matrix lost positive definiteness");
    }
  }
  const double squared = log_det(mid) - 0.5 * (log_det(x.eigen()) + log_det(y.eigen()));
  return checked_sqrt(squared, "Stein divergence");
}

double jeffrey_div(const SpdMatrix& x, const SpdMatrix& y) {
  require_same_dim(x, y);
  const double n = static_cast<double>(x.dim());
  const double squared = 0.5 * trace_inv_product(x, y) + 0.5 * trace_inv_product(y, x) - n;
  return checked_sqrt(squared, "Jeffrey divergence");
}

double lem_dist(const SpdMatrix& x, const SpdMatrix& y) {
  require_same_dim(x, y);
  return (spd_log(x).matrix() - spd_log(y).matrix()).norm();
}

double distance(MetricKind kind, const SpdMatrix& x, const SpdMatrix& y) {
  switch (kind) {
    case MetricKind::AIRM: return airm_dist(x, y);
    case MetricKind::Stein: return stein_div(x, y);
    case MetricKind::Jeffrey: return jeffrey_div(x, y);
    case MetricKind::LEM: return lem_dist(x, y);
  }
  throw Error(ErrorCode::InvalidInput, "unknown metric");
}

}  // namespace spdset
