#pragma once

// Kernels evaluated in the matrix-logarithm domain of the SPD manifold and
// Gram-matrix helpers.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "spdset/spd_core.hpp"

namespace spdset {

enum class KernelFamily { LogELinear, LogEArc, LogEPol, LogEExp, LogEGau };

const char* to_string(KernelFamily family) noexcept;
std::optional<KernelFamily> parse_kernel_family(std::string_view name);

struct KernelSpec {
  KernelFamily family = KernelFamily::LogEArc;
  /// Arc-cosine order r; ignored by the other families.
  int order = 0;
  int max_order = 3;
  /// Named hyperparameters: "gamma", "c", "degree". Missing values are
  /// filled in by gram() from the items it is given.
  std::map<std::string, double> params;

  static KernelSpec linear() { return {KernelFamily::LogELinear, 0, 3, {}}; }
  static KernelSpec arc(int r) { return {KernelFamily::LogEArc, r, 3, {}}; }
  static KernelSpec variant(KernelFamily family, std::map<std::string, double> params = {}) {
    return {family, 0, 3, std::move(params)};
  }
};

class GramMatrix {
 public:
  GramMatrix() = default;
  explicit GramMatrix(Matrix entries, std::optional<KernelSpec> spec = std::nullopt);

  Index dim() const noexcept { return entries_.rows(); }
  const Matrix& matrix() const noexcept { return entries_; }
  double operator()(Index i, Index j) const { return entries_(i, j); }
  const std::optional<KernelSpec>& spec() const noexcept { return spec_; }

  double min_eigenvalue() const;
  double max_eigenvalue() const;
  /// λ_min ≥ −tol·max(1, λ_max).
  bool is_psd(double tol = 1e-8) const;

 private:
  Matrix entries_;
  std::optional<KernelSpec> spec_;
};

/// Angular dependence function of the arc-cosine kernel, closed forms for r ≤ 3.
double angular_j(int r, double theta, int max_order = 3);

/// (1/π)‖x‖ʳ‖y‖ʳ J_r(θ). A zero-norm argument is given θ = π/2.
double arccos_kernel(const Vector& x, const Vector& y, int r);

/// Tr(log X · log Y).
double loge_linear_kernel(const SpdMatrix& x, const SpdMatrix& y);

/// Arc-cosine kernel on the matrix logarithms with the Frobenius inner product.
double loge_arc_kernel(const SpdMatrix& x, const SpdMatrix& y, int r);

/// Polynomial, exponential or Gaussian kernel in the log domain. `spec.params`
/// must carry every hyperparameter the family needs.
double loge_variant_kernel(const SpdMatrix& x, const SpdMatrix& y, const KernelSpec& spec);

/// Dispatches on spec.family.
double kernel(const SpdMatrix& x, const SpdMatrix& y, const KernelSpec& spec);

/// Evaluates a kernel given precomputed logarithms. `spec` must be fully resolved.
double kernel_from_logs(const Matrix& log_x, const Matrix& log_y, const KernelSpec& spec);

/// Fills missing gamma (1 / mean ‖log X‖²_F over `logs`), c (1) and degree (2),
/// then validates the hyperparameters.
KernelSpec resolve_kernel_spec(const KernelSpec& spec, std::span<const Matrix> logs);

GramMatrix gram(std::span<const SpdMatrix> items, const KernelSpec& spec);

/// Gram over items given by their logarithms.
GramMatrix gram_from_logs(std::span<const Matrix> logs, const KernelSpec& spec);

/// K − rowmeans − colmeans + grandmean.
GramMatrix center_gram(const GramMatrix& k);

}  // namespace spdset
