#include "spdset/spd_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace spdset {
namespace {

constexpr double kPi = std::numbers::pi;

void require_same_dim(const SpdMatrix& x, const SpdMatrix& y) {
  if (x.dim() != y.dim()) {
    throw Error(ErrorCode::DimMismatch, "operands have dims " + std::to_string(x.dim()) +
                                            " and " + std::to_string(y.dim()));
  }
}

// Frobenius inner product as an elementwise sum, so (a, b) and (b, a) give
// bit-identical results.
double frobenius_dot(const Matrix& a, const Matrix& b) { return a.cwiseProduct(b).sum(); }

// Arc-cosine kernel from an inner product and two norms.
// Angle as 2·atan2(‖x̂ − ŷ‖, ‖x̂ + ŷ‖) over the unit vectors; accurate near 0 and π.
template <typename A, typename B>
double arc_between(const Eigen::MatrixBase<A>& x, const Eigen::MatrixBase<B>& y, int r) {
  const double norm_x = x.norm();
  const double norm_y = y.norm();
  if (!std::isfinite(norm_x) || !std::isfinite(norm_y)) {
    throw Error(ErrorCode::NumericalError, "arc-cosine kernel on non-finite input");
  }
  double theta = kPi / 2.0;
  if (norm_x > 0.0 && norm_y > 0.0) {
    const double diff = (x / norm_x - y / norm_y).norm();
    const double sum = (x / norm_x + y / norm_y).norm();
    theta = std::clamp(2.0 * std::atan2(diff, sum), 0.0, kPi);
  }
  return std::pow(norm_x, r) * std::pow(norm_y, r) * angular_j(r, theta) / kPi;
}

double param(const KernelSpec& spec, const char* name) {
  auto it = spec.params.find(name);
  if (it == spec.params.end()) {
    throw Error(ErrorCode::InvalidSpec, std::string("missing kernel hyperparameter '") + name + "'");
  }
  return it->second;
}

void validate_variant(const KernelSpec& spec) {
  switch (spec.family) {
    case KernelFamily::LogEPol: {
      const double degree = param(spec, "degree");
      if (!(param(spec, "gamma") > 0.0)) throw Error(ErrorCode::InvalidSpec, "gamma must be > 0");
      if (!(param(spec, "c") >= 0.0)) throw Error(ErrorCode::InvalidSpec, "c must be >= 0");
      if (!(degree >= 1.0) || degree != std::floor(degree)) {
        throw Error(ErrorCode::InvalidSpec, "degree must be a positive integer");
      }
      break;
    }
    case KernelFamily::LogEExp:
    case KernelFamily::LogEGau:
      if (!(param(spec, "gamma") > 0.0)) throw Error(ErrorCode::InvalidSpec, "gamma must be > 0");
      break;
    default:
      throw Error(ErrorCode::InvalidSpec, "not a LogE variant family");
  }
}

void validate_order(const KernelSpec& spec) {
  if (spec.order < 0 || spec.order > spec.max_order) {
    throw Error(ErrorCode::InvalidSpec, "arc-cosine order " + std::to_string(spec.order) +
                                            " outside [0, " + std::to_string(spec.max_order) + "]");
  }
}

}  // namespace

const char* to_string(KernelFamily family) noexcept {
  switch (family) {
    case KernelFamily::LogELinear: return "loge-linear";
    case KernelFamily::LogEArc: return "loge-arc";
    case KernelFamily::LogEPol: return "loge-pol";
    case KernelFamily::LogEExp: return "loge-exp";
    case KernelFamily::LogEGau: return "loge-gau";
  }
  return "unknown";
}

std::optional<KernelFamily> parse_kernel_family(std::string_view name) {
  if (name == "loge-linear" || name == "lek") return KernelFamily::LogELinear;
  if (name == "loge-arc" || name == "arc") return KernelFamily::LogEArc;
  if (name == "loge-pol" || name == "pol") return KernelFamily::LogEPol;
  if (name == "loge-exp" || name == "exp") return KernelFamily::LogEExp;
  if (name == "loge-gau" || name == "gau") return KernelFamily::LogEGau;
  return std::nullopt;
}

GramMatrix::GramMatrix(Matrix entries, std::optional<KernelSpec> spec)
    : entries_(std::move(entries)), spec_(std::move(spec)) {
  if (entries_.rows() != entries_.cols()) {
    throw Error(ErrorCode::InvalidInput, "Gram matrix must be square");
  }
}

double GramMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(entries_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

double GramMatrix::max_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(entries_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(solver.eigenvalues().size() - 1);
}

bool GramMatrix::is_psd(double tol) const {
  if (dim() == 0) return true;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(entries_, Eigen::EigenvaluesOnly);
  const double lo = solver.eigenvalues()(0);
  const double hi = solver.eigenvalues()(dim() - 1);
  return lo >= -tol * std::max(1.0, hi);
}

// Closed forms of J_r(θ) = (−1)^r sin^{2r+1}θ ((1/sinθ) ∂/∂θ)^r ((π−θ)/sinθ):
//   J_0 = π − θ
//   J_1 = sinθ + (π−θ)cosθ
//   J_2 = 3 sinθ cosθ + (π−θ)(1 + 2cos²θ)
//   J_3 = 4 sin³θ + 15 sinθ cos²θ + (π−θ)(9 sin²θ cosθ + 15 cos³θ)
double angular_j(int r, double theta, int max_order) {
  if (r < 0 || r > max_order || r > 3) {
    throw Error(ErrorCode::InvalidInput, "angular function order " + std::to_string(r) +
                                             " is not supported");
  }
  if (!(theta >= -1e-12 && theta <= kPi + 1e-12)) {
    throw Error(ErrorCode::InvalidInput, "angle " + std::to_string(theta) + " outside [0, pi]");
  }
  theta = std::clamp(theta, 0.0, kPi);
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  const double rest = kPi - theta;
  switch (r) {
    case 0: return rest;
    case 1: return s + rest * c;
    case 2: return 3.0 * s * c + rest * (1.0 + 2.0 * c * c);
    default: return 4.0 * s * s * s + 15.0 * s * c * c + rest * (9.0 * s * s * c + 15.0 * c * c * c);
  }
}

double arccos_kernel(const Vector& x, const Vector& y, int r) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::DimMismatch, "vectors have lengths " + std::to_string(x.size()) +
                                            " and " + std::to_string(y.size()));
  }
  return arc_between(x, y, r);
}

double loge_linear_kernel(const SpdMatrix& x, const SpdMatrix& y) {
  require_same_dim(x, y);
  return frobenius_dot(spd_log(x).matrix(), spd_log(y).matrix());
}

double loge_arc_kernel(const SpdMatrix& x, const SpdMatrix& y, int r) {
  require_same_dim(x, y);
  return kernel_from_logs(spd_log(x).matrix(), spd_log(y).matrix(), KernelSpec::arc(r));
}

double loge_variant_kernel(const SpdMatrix& x, const SpdMatrix& y, const KernelSpec& spec) {
  require_same_dim(x, y);
  validate_variant(spec);
  return kernel_from_logs(spd_log(x).matrix(), spd_log(y).matrix(), spec);
}

double kernel(const SpdMatrix& x, const SpdMatrix& y, const KernelSpec& spec) {
  switch (spec.family) {
    case KernelFamily::LogELinear: return loge_linear_kernel(x, y);
    case KernelFamily::LogEArc:
      validate_order(spec);
      return loge_arc_kernel(x, y, spec.order);
    default: return loge_variant_kernel(x, y, spec);
  }
}

double kernel_from_logs(const Matrix& log_x, const Matrix& log_y, const KernelSpec& spec) {
  switch (spec.family) {
    case KernelFamily::LogELinear:
      return frobenius_dot(log_x, log_y);
    case KernelFamily::LogEArc:
      validate_order(spec);
      return arc_between(log_x, log_y, spec.order);
    case KernelFamily::LogEPol:
      return std::pow(param(spec, "gamma") * frobenius_dot(log_x, log_y) + param(spec, "c"),
                      param(spec, "degree"));
    case KernelFamily::LogEExp:
      return std::exp(param(spec, "gamma") * frobenius_dot(log_x, log_y));
    case KernelFamily::LogEGau:
      return std::exp(-param(spec, "gamma") * (log_x - log_y).squaredNorm());
  }
  throw Error(ErrorCode::InvalidSpec, "unknown kernel family");
}

KernelSpec resolve_kernel_spec(const KernelSpec& spec, std::span<const Matrix> logs) {
  KernelSpec out = spec;
  switch (spec.family) {
    case KernelFamily::LogELinear:
      return out;
    case KernelFamily::LogEArc:
      validate_order(out);
      return out;
    default:
      break;
  }
  if (!out.params.contains("gamma")) {
    double mean_sq = 0.0;
    for (const Matrix& l : logs) mean_sq += l.squaredNorm();
    if (!logs.empty()) mean_sq /= static_cast<double>(logs.size());
    if (!(mean_sq > 0.0)) {
      throw Error(ErrorCode::InvalidSpec, "cannot derive gamma: all items have zero log-norm");
    }
    out.params["gamma"] = 1.0 / mean_sq;
  }
  if (out.family == KernelFamily::LogEPol) {
    out.params.try_emplace("c", 1.0);
    out.params.try_emplace("degree", 2.0);
  }
  validate_variant(out);
  return out;
}

GramMatrix gram_from_logs(std::span<const Matrix> logs, const KernelSpec& spec) {
  if (logs.empty()) throw Error(ErrorCode::InvalidInput, "Gram matrix needs at least one item");
  const KernelSpec resolved = resolve_kernel_spec(spec, logs);
  const Index n = static_cast<Index>(logs.size());
  Matrix k(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i; j < n; ++j) {
      try {
        k(i, j) = kernel_from_logs(logs[i], logs[j], resolved);
      } catch (const Error& e) {
        throw Error(e.code(), "item pair (" + std::to_string(i) + ", " + std::to_string(j) +
                                  "): " + e.what());
      }
      k(j, i) = k(i, j);
    }
  }
  return GramMatrix(std::move(k), resolved);
}

GramMatrix gram(std::span<const SpdMatrix> items, const KernelSpec& spec) {
  if (items.empty()) throw Error(ErrorCode::InvalidInput, "Gram matrix needs at least one item");
  std::vector<Matrix> logs;
  logs.reserve(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].dim() != items[0].dim()) {
      throw Error(ErrorCode::DimMismatch, "item " + std::to_string(i) + " has dim " +
                                              std::to_string(items[i].dim()) + ", expected " +
                                              std::to_string(items[0].dim()));
    }
    logs.push_back(spd_log(items[i]).matrix());
  }
  return gram_from_logs(logs, spec);
}

GramMatrix center_gram(const GramMatrix& k) {
  Matrix centered = double_center(k.matrix());
  return GramMatrix((centered + centered.transpose()) * 0.5, k.spec());
}

}  // namespace spdset
