#include <gtest/gtest.h>

#include <filesystem>
#include <string>

#include "spdset/image.hpp"
#include "test_support.hpp"

namespace spdset {
namespace {

std::vector<unsigned char> bytes_of(const std::string& s) { return {s.begin(), s.end()}; }

TEST(DecodePnm, AsciiGraymap) {
  const auto data = bytes_of("P2\n# comment\n3 2\n255\n0 128 255\n10 20 30\n");
  const RawImage raw = decode_pnm(data);
  EXPECT_EQ(raw.width, 3);
  EXPECT_EQ(raw.height, 2);
  EXPECT_EQ(raw.channels, 1);
  EXPECT_EQ(raw.samples, (std::vector<std::uint16_t>{0, 128, 255, 10, 20, 30}));
}

TEST(DecodePnm, BinaryGraymapAndPixmap) {
  std::string p5 = "P5 2 1 255\n";
  p5 += static_cast<char>(7);
  p5 += static_cast<char>(200);
  EXPECT_EQ(decode_pnm(bytes_of(p5)).samples, (std::vector<std::uint16_t>{7, 200}));

  std::string p6 = "P6\n1 1\n255\n";
  p6 += std::string{static_cast<char>(255), 0, 0};
  const RawImage rgb = decode_pnm(bytes_of(p6));
  EXPECT_EQ(rgb.channels, 3);
  EXPECT_NEAR(to_grayscale(rgb).at(0, 0), 0.299, 1e-15);
}

TEST(DecodePnm, SixteenBitSamples) {
  std::string p5 = "P5 1 1 65535\n";
  p5 += static_cast<char>(0x12);
  p5 += static_cast<char>(0x34);
  const RawImage raw = decode_pnm(bytes_of(p5));
  EXPECT_EQ(raw.samples[0], 0x1234);
  EXPECT_NEAR(to_grayscale(raw).at(0, 0), 0x1234 / 65535.0, 1e-15);
}

TEST(DecodePnm, MalformedInputThrows) {
  for (const std::string bad : {"", "P7 1 1 255\n", "P5 2 2 255\nab", "P2 2 1 255\n1", "JPEG"}) {
    try {
      decode_pnm(bytes_of(bad));
      FAIL() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::FrameDecodeError);
    }
  }
}

TEST(WritePgm, RoundTripsEightBitValues) {
  Image img(3, 4);
  for (std::size_t i = 0; i < img.pixels.size(); ++i) img.pixels[i] = static_cast<double>(i * 20) / 255.0;
  const auto path = std::filesystem::temp_directory_path() / "spdset_image_test.pgm";
  write_pgm(path, img);
  const Image back = to_grayscale(read_pnm(path));
  std::filesystem::remove(path);
  ASSERT_EQ(back.height, 3);
  ASSERT_EQ(back.width, 4);
  for (std::size_t i = 0; i < img.pixels.size(); ++i) EXPECT_NEAR(back.pixels[i], img.pixels[i], 1e-12);
}

TEST(Resize, ConstantFramePreserved) {
  RawImage raw{48, 48, 1, 255, std::vector<std::uint16_t>(48 * 48, 77)};
  const Image out = preprocess_frame(raw, {24, 24, 0});
  ASSERT_EQ(out.height, 24);
  for (double v : out.pixels) EXPECT_NEAR(v, 77.0 / 255.0, 1e-15);
}

TEST(Resize, SameSizeIsIdentity) {
  Image board(24, 24);
  for (int r = 0; r < 24; ++r)
    for (int c = 0; c < 24; ++c) board.at(r, c) = (r + c) % 2;
  EXPECT_EQ(resize_bilinear(board, 24, 24).pixels, board.pixels);
}

TEST(Resize, DownscaleByTwoAveragesPairs) {
  Image src(1, 4);
  src.pixels = {0.0, 1.0, 0.2, 0.6};
  const Image out = resize_bilinear(src, 1, 2);
  EXPECT_NEAR(out.pixels[0], 0.5, 1e-15);
  EXPECT_NEAR(out.pixels[1], 0.4, 1e-15);
}

TEST(Rotate, HalfTurnTwiceIsIdentity) {
  Rng rng(1);
  const Image img = testing::random_frames(rng, 1, 5, 7).front();
  const Image back = rotate(rotate(img, 180), 180);
  EXPECT_EQ(back.pixels, img.pixels);
}

TEST(Rotate, QuarterTurnIsClockwise) {
  Image img(2, 3);
  img.pixels = {1, 2, 3, 4, 5, 6};
  const Image r = rotate(img, 90);
  ASSERT_EQ(r.height, 3);
  ASSERT_EQ(r.width, 2);
  EXPECT_EQ(r.pixels, (std::vector<double>{4, 1, 5, 2, 6, 3}));
  const Image full = rotate(rotate(rotate(r, 90), 90), 90);
  EXPECT_EQ(full.pixels, img.pixels);
  EXPECT_THROW(rotate(img, 45), Error);
}

}  // namespace
}  // namespace spdset
