#include "spdset/descriptor.hpp"

#include <cmath>
#include <string>

namespace spdset {
namespace {

void require_positive_trace(double trace, const std::string& what) {
  if (!(trace > 0.0)) {
    throw Error(ErrorCode::DegenerateSet, what + " has zero variance");
  }
}

}  // namespace

ImageSet::ImageSet(int label_, std::vector<Image> frames_, std::string source_id_)
    : label(label_), frames(std::move(frames_)), source_id(std::move(source_id_)) {
  if (frames.size() < 2) {
    throw Error(ErrorCode::InvalidInput, "image set '" + source_id + "' needs at least 2 frames");
  }
  const int h = frames.front().height;
  const int w = frames.front().width;
  if (h < 1 || w < 1) throw Error(ErrorCode::InvalidInput, "empty frame in '" + source_id + "'");
  for (const Image& f : frames) {
    if (f.height != h || f.width != w) {
      throw Error(ErrorCode::InvalidInput, "frames of '" + source_id + "' differ in size");
    }
    for (double v : f.pixels) {
      if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
        throw Error(ErrorCode::InvalidInput, "intensity outside [0, 1] in '" + source_id + "'");
      }
    }
  }
}

Matrix ImageSet::feature_matrix() const {
  const Index d = static_cast<Index>(height()) * width();
  Matrix s(d, frame_count());
  for (int k = 0; k < frame_count(); ++k) {
    s.col(k) = Eigen::Map<const Vector>(frames[k].pixels.data(), d);
  }
  return s;
}

Matrix covariance_matrix(const ImageSet& set, double lambda_frac) {
  const Matrix s = set.feature_matrix();
  const Vector mean = s.rowwise().mean();
  const Index d = s.rows();
  Matrix c = Matrix::Zero(d, d);
  for (Index k = 0; k < s.cols(); ++k) {
    const Vector dev = s.col(k) - mean;
    c.noalias() += dev * dev.transpose();
  }
  c /= static_cast<double>(s.cols() - 1);
  c.diagonal().array() += lambda_frac * c.trace();
  return c;
}

Matrix covariance_by_pixel_kernel(const ImageSet& set, double lambda_frac) {
  Matrix centered = set.feature_matrix();
  const Vector mean = centered.rowwise().mean();
  centered.colwise() -= mean;
  centered /= std::sqrt(static_cast<double>(centered.cols() - 1));
  const Index d = centered.rows();
  Matrix c(d, d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = i; j < d; ++j) c(i, j) = c(j, i) = centered.row(i).dot(centered.row(j));
  }
  c.diagonal().array() += lambda_frac * c.trace();
  return c;
}

SpdMatrix traditional_covds(const ImageSet& set, double lambda_frac) {
  if (!(lambda_frac >= 0.0)) throw Error(ErrorCode::InvalidInput, "lambda_frac must be >= 0");
  Matrix c = covariance_matrix(set, 0.0);
  const double trace = c.trace();
  require_positive_trace(trace, "image set '" + set.source_id + "'");
  c.diagonal().array() += lambda_frac * trace;
  return SpdMatrix::from(c, EigenFloorPolicy::Clamp);
}

int window_count(int height, int width, int win, int stride) {
  if (win < 1 || stride < 1 || win > height || win > width) return 0;
  return ((height - win) / stride + 1) * ((width - win) / stride + 1);
}

std::vector<SubImageSet> extract_subsets(const ImageSet& set, int win, int stride) {
  if (stride < 1) throw Error(ErrorCode::InvalidInput, "stride must be >= 1");
  if (win < 1 || win > set.height() || win > set.width()) {
    throw Error(ErrorCode::InvalidInput, "window " + std::to_string(win) + " does not fit in " +
                                             std::to_string(set.height()) + "x" +
                                             std::to_string(set.width()) + " frames");
  }
  std::vector<SubImageSet> out;
  out.reserve(window_count(set.height(), set.width(), win, stride));
  const int n = set.frame_count();
  for (int r = 0; r + win <= set.height(); r += stride) {
    for (int c = 0; c + win <= set.width(); c += stride) {
      SubImageSet sub{r, c, Matrix(win * win, n)};
      for (int k = 0; k < n; ++k) {
        const Image& f = set.frames[k];
        for (int dr = 0; dr < win; ++dr)
          for (int dc = 0; dc < win; ++dc) sub.features(dr * win + dc, k) = f.at(r + dr, c + dc);
      }
      out.push_back(std::move(sub));
    }
  }
  return out;
}

SubSetDescriptor gaussian_embed(const SubImageSet& sub, double beta, double lambda_frac,
                                double lambda_abs) {
  if (!(beta > 0.0)) throw Error(ErrorCode::InvalidInput, "beta must be > 0");
  const Index n = sub.features.cols();
  if (n < 2) throw Error(ErrorCode::InvalidInput, "Gaussian embedding needs at least 2 samples");
  const Index d = sub.features.rows();

  const Vector mu = sub.features.rowwise().mean();
  Matrix centered = sub.features;
  centered.colwise() -= mu;
  Matrix sigma = centered * centered.transpose() / static_cast<double>(n - 1);
  const double trace = sigma.trace();
  const double ridge = lambda_frac * trace + lambda_abs;
  if (!(ridge > 0.0) && !(trace > 0.0)) {
    throw Error(ErrorCode::DegenerateSet, "window at (" + std::to_string(sub.row) + ", " +
                                              std::to_string(sub.col) + ") is constant");
  }
  sigma.diagonal().array() += ridge;

  Matrix g(d + 1, d + 1);
  g.topLeftCorner(d, d) = sigma + beta * beta * mu * mu.transpose();
  g.topRightCorner(d, 1) = beta * mu;
  g.bottomLeftCorner(1, d) = beta * mu.transpose();
  g(d, d) = 1.0;
  return SubSetDescriptor{SpdMatrix::from(g, EigenFloorPolicy::Clamp), false};
}

std::vector<Matrix> centralized_logs(const ImageSet& set, const PipelineConfig& cfg) {
  const std::vector<SubImageSet> subs = extract_subsets(set, cfg.win, cfg.stride);
  std::vector<Matrix> logs;
  logs.reserve(subs.size());
  for (std::size_t i = 0; i < subs.size(); ++i) {
    try {
      const SubSetDescriptor desc = gaussian_embed(subs[i], cfg.beta, cfg.lambda_frac, cfg.lambda_abs);
      logs.push_back(spd_log(mean_centralize(desc.matrix)).matrix());
    } catch (const Error& e) {
      throw Error(e.code(), "sub-image set " + std::to_string(i) + " of '" + set.source_id +
                                "': " + e.what());
    }
  }
  return logs;
}

OrderedGrams local_grams(const ImageSet& set, const PipelineConfig& cfg) {
  const std::vector<Matrix> logs = centralized_logs(set, cfg);
  OrderedGrams out;
  if (cfg.kernel.family != KernelFamily::LogEArc) {
    out.orders = {0};
    out.grams.push_back(gram_from_logs(logs, cfg.kernel));
    return out;
  }
  if (cfg.orders.empty()) throw Error(ErrorCode::InvalidInput, "no arc-cosine orders configured");
  for (int r : cfg.orders) {
    KernelSpec spec = cfg.kernel;
    spec.order = r;
    out.orders.push_back(r);
    out.grams.push_back(gram_from_logs(logs, spec));
  }
  return out;
}

GramMatrix combine_grams(const OrderedGrams& locals, const KernelWeights& weights) {
  if (locals.grams.empty()) throw Error(ErrorCode::InvalidInput, "no local Grams to combine");
  const Vector w = weights.applied();
  if (static_cast<std::size_t>(w.size()) != locals.grams.size() || weights.orders != locals.orders) {
    throw Error(ErrorCode::InvalidInput, "weights do not match the configured orders");
  }
  Matrix sum = Matrix::Zero(locals.grams.front().dim(), locals.grams.front().dim());
  for (std::size_t r = 0; r < locals.grams.size(); ++r) {
    if (w(static_cast<Index>(r)) != 0.0) sum += w(static_cast<Index>(r)) * locals.grams[r].matrix();
  }
  return GramMatrix(std::move(sum));
}

CovDsS build_covds_s(const ImageSet& set, const PipelineConfig& cfg, const KernelWeights& weights) {
  OrderedGrams locals = local_grams(set, cfg);
  CovDsS out;
  out.orders_used = locals.orders;
  if (cfg.kernel.family == KernelFamily::LogEArc) {
    out.matrix = combine_grams(locals, weights);
    out.weights = weights;
  } else {
    out.matrix = locals.grams.front();
    out.weights = KernelWeights::uniform(locals.orders);
  }
  if (cfg.keep_locals) out.locals = std::move(locals.grams);
  return out;
}

SpdMatrix finalize_representation(const GramMatrix& rep, double eig_floor) {
  if (!(eig_floor > 0.0)) throw Error(ErrorCode::InvalidInput, "eig_floor must be > 0");
  try {
    return SpdMatrix::from_clamped(SymMatrix(rep.matrix()), eig_floor);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotPositiveDefinite) throw;
    throw Error(ErrorCode::DegenerateRepresentation, "representation has no positive eigenvalue");
  }
}

SpdMatrix finalize_representation(const CovDsS& rep, double eig_floor) {
  return finalize_representation(rep.matrix, eig_floor);
}

}  // namespace spdset
