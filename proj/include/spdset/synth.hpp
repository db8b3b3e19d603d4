#pragma once

#include <cstdint>
#include <filesystem>

#include "spdset/image.hpp"

namespace spdset {

/// Synthetic image sets whose frames are Gaussian random fields with a
/// class-specific spatial correlation length (smoothing width). Each
/// set also gets its own brightness, contrast and static background pattern,
/// so sets of one class share texture statistics but not appearance.
struct SynthConfig {
  int classes = 3;
  int sets = 10;
  int frames = 8;
  int height = 24;
  int width = 24;
  std::uint64_t seed = 0;
};

/// One frame of class `label` for the given per-set state; exposed for tests.
Image synth_texture(int label, int classes, int height, int width, std::uint64_t seed);

/// Writes root/class_XX/set_YY/frame_ZZ.pgm. Output depends only on the config.
void write_synthetic_dataset(const std::filesystem::path& root, const SynthConfig& cfg);

}  // namespace spdset
