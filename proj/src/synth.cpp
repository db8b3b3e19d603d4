#include "spdset/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

#include "spdset/error.hpp"
#include "spdset/random.hpp"

namespace spdset {
namespace {

constexpr int kRadius = 4;

// Isotropic Gaussian smoothing filter scaled to unit output variance. Its
// width (the texture's correlation length) grows with the class index.
std::vector<double> smoothing_filter(double sigma) {
  const int size = 2 * kRadius + 1;
  std::vector<double> f(static_cast<std::size_t>(size) * size);
  double norm = 0.0;
  for (int dy = -kRadius; dy <= kRadius; ++dy) {
    for (int dx = -kRadius; dx <= kRadius; ++dx) {
      const double w = std::exp(-0.5 * (dx * dx + dy * dy) / (sigma * sigma));
      f[static_cast<std::size_t>(dy + kRadius) * size + (dx + kRadius)] = w;
      norm += w * w;
    }
  }
  for (double& w : f) w /= std::sqrt(norm);
  return f;
}

double class_sigma(int label, int classes) {
  return 0.5 + 1.5 * label / std::max(1, classes - 1);
}

Image filtered_noise(const std::vector<double>& filter, int height, int width, Rng& rng) {
  const int size = 2 * kRadius + 1;
  const int ph = height + 2 * kRadius;
  const int pw = width + 2 * kRadius;
  std::vector<double> noise(static_cast<std::size_t>(ph) * pw);
  for (double& v : noise) v = rng.normal();
  Image out(height, width);
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      double acc = 0.0;
      for (int i = 0; i < size; ++i)
        for (int j = 0; j < size; ++j)
          acc += filter[static_cast<std::size_t>(i) * size + j] *
                 noise[static_cast<std::size_t>(r + i) * pw + (c + j)];
      out.at(r, c) = acc;
    }
  }
  return out;
}

}  // namespace

Image synth_texture(int label, int classes, int height, int width, std::uint64_t seed) {
  Rng rng(seed);
  return filtered_noise(smoothing_filter(class_sigma(label, classes)), height, width, rng);
}

void write_synthetic_dataset(const std::filesystem::path& root, const SynthConfig& cfg) {
  if (cfg.classes < 2 || cfg.sets < 2 || cfg.frames < 2 || cfg.height < 1 || cfg.width < 1) {
    throw Error(ErrorCode::InvalidInput, "synthetic dataset needs >= 2 classes, sets and frames");
  }
  std::error_code ec;
  std::filesystem::create_directories(root, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + root.string() + ": " + ec.message());

  const std::vector<double> background_filter = smoothing_filter(3.0);
  char name[64];
  for (int k = 0; k < cfg.classes; ++k) {
    const std::vector<double> filter = smoothing_filter(class_sigma(k, cfg.classes));
    for (int s = 0; s < cfg.sets; ++s) {
      Rng rng(Rng::derive_seed(cfg.seed, static_cast<std::uint64_t>(k) * 1'000'003ULL + s));
      const double brightness = rng.uniform(-0.02, 0.02);
      const double contrast = rng.uniform(0.95, 1.05);
      // Static pattern shared by every frame of the set; it carries no class signal.
      Image background = filtered_noise(background_filter, cfg.height, cfg.width, rng);

      std::snprintf(name, sizeof(name), "class_%02d/set_%02d", k, s);
      const std::filesystem::path dir = root / name;
      std::filesystem::create_directories(dir, ec);
      if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());
      for (int f = 0; f < cfg.frames; ++f) {
        const Image texture = filtered_noise(filter, cfg.height, cfg.width, rng);
        Image frame(cfg.height, cfg.width);
        for (std::size_t p = 0; p < frame.pixels.size(); ++p) {
          const double v = 0.5 + brightness + 0.01 * background.pixels[p] +
                           0.12 * contrast * texture.pixels[p];
          frame.pixels[p] = std::clamp(v, 0.0, 1.0);
        }
        std::snprintf(name, sizeof(name), "frame_%02d.pgm", f);
        write_pgm(dir / name, frame);
      }
    }
  }
}

}  // namespace spdset
