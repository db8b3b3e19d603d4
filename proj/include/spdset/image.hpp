#pragma once

// Grayscale frames, Netpbm decoding (P2/P3/P5/P6) and the resize/rotate
// preprocessing applied before descriptor construction.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "spdset/error.hpp"

namespace spdset {

/// Row-major grid of real intensities.
struct Image {
  int height = 0;
  int width = 0;
  std::vector<double> pixels;

  Image() = default;
  Image(int h, int w, double fill = 0.0)
      : height(h), width(w), pixels(static_cast<std::size_t>(h) * w, fill) {}

  double& at(int r, int c) { return pixels[static_cast<std::size_t>(r) * width + c]; }
  double at(int r, int c) const { return pixels[static_cast<std::size_t>(r) * width + c]; }
};

/// Decoded Netpbm frame before any normalization.
struct RawImage {
  int height = 0;
  int width = 0;
  int channels = 1;  // 1 (graymap) or 3 (pixmap)
  int maxval = 255;
  std::vector<std::uint16_t> samples;  // height·width·channels, interleaved
};

/// Throws FrameDecodeError on malformed data.
RawImage decode_pnm(std::span<const unsigned char> bytes);
RawImage read_pnm(const std::filesystem::path& path);

/// Writes an 8-bit binary graymap; intensities are expected in [0, 1].
void write_pgm(const std::filesystem::path& path, const Image& image);

/// Luminance (0.299, 0.587, 0.114) for color input; output scaled to [0, 1] by maxval.
Image to_grayscale(const RawImage& raw);

/// Bilinear resampling with pixel-center alignment. Same-size input is copied.
Image resize_bilinear(const Image& src, int height, int width);

/// Clockwise rotation by 0, 90, 180 or 270 degrees.
Image rotate(const Image& src, int degrees);

struct PreprocessConfig {
  int height = 24;
  int width = 24;
  int rotation = 0;
};

/// grayscale → resize → rotate.
Image preprocess_frame(const RawImage& raw, const PreprocessConfig& cfg);

}  // namespace spdset
