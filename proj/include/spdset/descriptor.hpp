#pragma once

// Image-set representations: the pixel covariance baseline and the
// sub-image-set kernel-matrix descriptor (sliding windows → Gaussian
// embedding → log-domain mean centralization → per-order arc-cosine Grams).

#include <string>
#include <vector>

#include "spdset/alignment.hpp"
#include "spdset/image.hpp"
#include "spdset/spd_kernels.hpp"

namespace spdset {

/// Frames of one image set. All frames share a size; intensities lie in [0, 1].
struct ImageSet {
  int label = 0;
  std::vector<Image> frames;
  std::string source_id;

  ImageSet() = default;
  ImageSet(int label, std::vector<Image> frames, std::string source_id = {});

  int frame_count() const noexcept { return static_cast<int>(frames.size()); }
  int height() const noexcept { return frames.front().height; }
  int width() const noexcept { return frames.front().width; }

  /// d×n matrix whose columns are the row-major vectorized frames.
  Matrix feature_matrix() const;
};

/// Stack of same-position patches across every frame of a set.
struct SubImageSet {
  int row = 0;
  int col = 0;
  /// win²×n; column k is the row-major patch from frame k.
  Matrix features;
};

struct SubSetDescriptor {
  SpdMatrix matrix;
  bool centralized = false;
};

struct PipelineConfig {
  int win = 6;
  int stride = 2;
  double beta = 0.9;
  /// Covariance ridge as a fraction of its trace.
  double lambda_frac = 1e-3;
  /// Absolute ridge added to sub-image-set covariances so constant patches stay SPD.
  double lambda_abs = 1e-6;
  std::vector<int> orders{0, 1, 2, 3};
  /// Relative eigenvalue floor used by finalize_representation.
  double eig_floor = 1e-8;
  bool keep_locals = false;
  /// Kernel between centralized sub-image-set descriptors. For LogE-Arc one
  /// Gram per entry of `orders` is built; other families produce a single Gram.
  KernelSpec kernel = KernelSpec::arc(0);
};

/// Sub-image-set kernel representation of one image set.
struct CovDsS {
  GramMatrix matrix;
  std::vector<int> orders_used;
  KernelWeights weights;
  /// Per-order Grams, filled only when PipelineConfig::keep_locals is set.
  std::vector<GramMatrix> locals;
};

/// Unbiased pixel covariance S̃S̃ᵀ plus lambda_frac·Tr(C)·I, accumulated over frames.
Matrix covariance_matrix(const ImageSet& set, double lambda_frac);

/// Same covariance computed as linear-kernel values between centered pixel rows.
Matrix covariance_by_pixel_kernel(const ImageSet& set, double lambda_frac);

/// Regularized covariance as an SPD matrix. Throws DegenerateSet for constant sets.
SpdMatrix traditional_covds(const ImageSet& set, double lambda_frac = 1e-3);

std::vector<SubImageSet> extract_subsets(const ImageSet& set, int win, int stride);

/// Number of windows extract_subsets produces for the given geometry.
int window_count(int height, int width, int win, int stride);

/// [[Σ + β²μμᵀ, βμ], [βμᵀ, 1]] with Σ the unbiased covariance plus
/// (lambda_frac·Tr(Σ) + lambda_abs)·I.
SubSetDescriptor gaussian_embed(const SubImageSet& sub, double beta, double lambda_frac,
                                double lambda_abs = 0.0);

/// Log-domain matrices of the centralized sub-image-set descriptors.
std::vector<Matrix> centralized_logs(const ImageSet& set, const PipelineConfig& cfg);

/// One Gram per configured order (or a single Gram for non-arc kernels).
OrderedGrams local_grams(const ImageSet& set, const PipelineConfig& cfg);

/// Σ_r weight_r · C_r over the per-order Grams.
GramMatrix combine_grams(const OrderedGrams& locals, const KernelWeights& weights);

CovDsS build_covds_s(const ImageSet& set, const PipelineConfig& cfg, const KernelWeights& weights);

/// Clamps eigenvalues to ≥ eig_floor·λ_max so the result is strictly SPD.
SpdMatrix finalize_representation(const GramMatrix& rep, double eig_floor = 1e-8);
SpdMatrix finalize_representation(const CovDsS& rep, double eig_floor = 1e-8);

}  // namespace spdset
