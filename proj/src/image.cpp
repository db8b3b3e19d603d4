#include "spdset/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>

namespace spdset {
namespace {

class PnmReader {
 public:
  explicit PnmReader(std::span<const unsigned char> bytes) : bytes_(bytes) {}

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  int read_int() {
    skip_space_and_comments();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) fail("expected an integer");
    long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_++] - '0');
      if (value > 1'000'000'000L) fail("integer too large");
    }
    return static_cast<int>(value);
  }

  /// Header and raster are separated by exactly one whitespace byte.
  void skip_single_space() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) fail("missing raster separator");
    ++pos_;
  }

  std::uint16_t read_binary_sample(int maxval) {
    if (maxval < 256) {
      if (pos_ >= bytes_.size()) fail("truncated raster");
      return bytes_[pos_++];
    }
    if (pos_ + 1 >= bytes_.size()) fail("truncated raster");
    const auto hi = bytes_[pos_++];
    const auto lo = bytes_[pos_++];
    return static_cast<std::uint16_t>((hi << 8) | lo);
  }

  unsigned char byte_at(std::size_t i) const { return i < bytes_.size() ? bytes_[i] : 0; }

  [[noreturn]] static void fail(const std::string& why) {
    throw Error(ErrorCode::FrameDecodeError, why);
  }

 private:
  std::span<const unsigned char> bytes_;
  std::size_t pos_ = 2;
};

}  // namespace

RawImage decode_pnm(std::span<const unsigned char> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P') PnmReader::fail("not a Netpbm file");
  const char kind = static_cast<char>(bytes[1]);
  if (kind != '2' && kind != '3' && kind != '5' && kind != '6') {
    PnmReader::fail(std::string("unsupported Netpbm variant P") + kind);
  }
  PnmReader reader(bytes);
  RawImage raw;
  raw.width = reader.read_int();
  raw.height = reader.read_int();
  raw.maxval = reader.read_int();
  raw.channels = (kind == '3' || kind == '6') ? 3 : 1;
  if (raw.width < 1 || raw.height < 1) PnmReader::fail("empty raster");
  if (raw.maxval < 1 || raw.maxval > 65535) PnmReader::fail("maxval out of range");
  const std::size_t count = static_cast<std::size_t>(raw.width) * raw.height * raw.channels;
  raw.samples.resize(count);
  if (kind == '5' || kind == '6') {
    reader.skip_single_space();
    for (std::size_t i = 0; i < count; ++i) raw.samples[i] = reader.read_binary_sample(raw.maxval);
  } else {
    for (std::size_t i = 0; i < count; ++i) raw.samples[i] = static_cast<std::uint16_t>(reader.read_int());
  }
  for (auto s : raw.samples) {
    if (s > raw.maxval) PnmReader::fail("sample exceeds maxval");
  }
  return raw;
}

RawImage read_pnm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FrameDecodeError, "cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  try {
    return decode_pnm(bytes);
  } catch (const Error& e) {
    throw Error(ErrorCode::FrameDecodeError, path.string() + ": " + e.what());
  }
}

void write_pgm(const std::filesystem::path& path, const Image& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << "P5\n" << image.width << ' ' << image.height << "\n255\n";
  for (double v : image.pixels) {
    const double scaled = std::round(std::clamp(v, 0.0, 1.0) * 255.0);
    out.put(static_cast<char>(static_cast<unsigned char>(scaled)));
  }
  if (!out) throw Error(ErrorCode::IoError, "failed writing " + path.string());
}

Image to_grayscale(const RawImage& raw) {
  Image out(raw.height, raw.width);
  const double scale = 1.0 / raw.maxval;
  for (std::size_t i = 0; i < out.pixels.size(); ++i) {
    if (raw.channels == 1) {
      out.pixels[i] = raw.samples[i] * scale;
    } else {
      const auto* p = &raw.samples[3 * i];
      out.pixels[i] = (0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2]) * scale;
    }
  }
  return out;
}

Image resize_bilinear(const Image& src, int height, int width) {
  if (height < 1 || width < 1) throw Error(ErrorCode::InvalidInput, "resize target must be positive");
  if (src.height == height && src.width == width) return src;
  Image out(height, width);
  const double sy = static_cast<double>(src.height) / height;
  const double sx = static_cast<double>(src.width) / width;
  for (int r = 0; r < height; ++r) {
    const double fy = std::clamp((r + 0.5) * sy - 0.5, 0.0, src.height - 1.0);
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, src.height - 1);
    const double wy = fy - y0;
    for (int c = 0; c < width; ++c) {
      const double fx = std::clamp((c + 0.5) * sx - 0.5, 0.0, src.width - 1.0);
      const int x0 = static_cast<int>(fx);
      const int x1 = std::min(x0 + 1, src.width - 1);
      const double wx = fx - x0;
      const double top = src.at(y0, x0) * (1.0 - wx) + src.at(y0, x1) * wx;
      const double bottom = src.at(y1, x0) * (1.0 - wx) + src.at(y1, x1) * wx;
      out.at(r, c) = top * (1.0 - wy) + bottom * wy;
    }
  }
  return out;
}

Image rotate(const Image& src, int degrees) {
  switch (degrees) {
    case 0:
      return src;
    case 90: {
      Image out(src.width, src.height);
      for (int r = 0; r < out.height; ++r)
        for (int c = 0; c < out.width; ++c) out.at(r, c) = src.at(src.height - 1 - c, r);
      return out;
    }
    case 180: {
      Image out(src.height, src.width);
      for (int r = 0; r < out.height; ++r)
        for (int c = 0; c < out.width; ++c)
          out.at(r, c) = src.at(src.height - 1 - r, src.width - 1 - c);
      return out;
    }
    case 270: {
      Image out(src.width, src.height);
      for (int r = 0; r < out.height; ++r)
        for (int c = 0; c < out.width; ++c) out.at(r, c) = src.at(c, src.width - 1 - r);
      return out;
    }
    default:
      throw Error(ErrorCode::InvalidInput, "rotation must be 0, 90, 180 or 270, got " +
                                               std::to_string(degrees));
  }
}

Image preprocess_frame(const RawImage& raw, const PreprocessConfig& cfg) {
  return rotate(resize_bilinear(to_grayscale(raw), cfg.height, cfg.width), cfg.rotation);
}

}  // namespace spdset
