#include <gtest/gtest.h>

#include <cmath>
#include <fstream>

#include <png.h>

#include "dahaze/error.hpp"
#include "dahaze/image_io.hpp"
#include "support.hpp"

using namespace dahaze;
using testing_support::TempDir;

namespace {

// Minimal 8-bit RGB PNG via libpng, independent of the code under test.
void write_rgb8(const std::filesystem::path& path, int w, int h, const std::vector<std::uint8_t>& rgb,
                int color_type = PNG_COLOR_TYPE_RGB, int depth = 8) {
  FILE* f = std::fopen(path.c_str(), "wb");
  ASSERT_NE(f, nullptr);
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  png_init_io(png, f);
  png_set_IHDR(png, info, w, h, depth, color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const int channels = color_type == PNG_COLOR_TYPE_RGB ? 3 : 1;
  const std::size_t stride = static_cast<std::size_t>(w) * channels * (depth / 8);
  for (int y = 0; y < h; ++y) png_write_row(png, rgb.data() + y * stride);
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  std::fclose(f);
}

}  // namespace

TEST(ImageIo, CodeValuesMapLinearly) {
  TempDir dir("io");
  write_rgb8(dir / "a.png", 3, 1, {255, 255, 255, 0, 0, 0, 128, 128, 128});
  const Image img = load_image(dir / "a.png");
  ASSERT_EQ(img.width(), 3);
  EXPECT_EQ(img.at(0, 0, 0), 1.0f);
  EXPECT_EQ(img.at(1, 0, 1), 0.0f);
  EXPECT_EQ(img.at(2, 0, 2), static_cast<float>(0.5019607843137255));
}

TEST(ImageIo, RoundTripConstantAndZeros) {
  TempDir dir("io");
  save_image(Image(6, 4, 0.5f), dir / "half.png");
  for (float v : testing_support::owned(load_image(dir / "half.png").samples())) EXPECT_LE(std::abs(v - 0.5f), 1.0f / 255.0f);
  save_image(Image(6, 4, 0.0f), dir / "zero.png");
  for (float v : testing_support::owned(load_image(dir / "zero.png").samples())) EXPECT_EQ(v, 0.0f);
}

TEST(ImageIo, RoundTripRandomWithinOneStep) {
  TempDir dir("io");
  Rng rng(11);
  const Image img = testing_support::random_image(31, 17, rng);
  save_image(img, dir / "r.png");
  const Image back = load_image(dir / "r.png");
  ASSERT_TRUE(back.same_shape(img));
  float worst = 0.f;
  for (std::size_t i = 0; i < img.samples().size(); ++i)
    worst = std::max(worst, std::abs(back.samples()[i] - img.samples()[i]));
  EXPECT_LE(worst, 1.0f / 255.0f);
}

TEST(ImageIo, EncodeIsDeterministic) {
  Rng rng(12);
  const Image img = testing_support::random_image(20, 20, rng);
  EXPECT_EQ(encode_png(img), encode_png(img));
}

TEST(ImageIo, DistinctErrors) {
  TempDir dir("io");
  EXPECT_THROW(load_image(dir / "missing.png"), FileNotFound);
  std::ofstream(dir / "junk.png") << "not a png at all";
  EXPECT_THROW(load_image(dir / "junk.png"), CorruptData);
  write_rgb8(dir / "gray.png", 2, 1, {1, 2}, PNG_COLOR_TYPE_GRAY);
  EXPECT_THROW(load_image(dir / "gray.png"), UnsupportedFormat);
  EXPECT_THROW(save_image(Image(1, 1, 0.f), dir / "no" / "such" / "dir.png"), UnwritablePath);
}

TEST(RawDepth, DecodeHandBuiltFile) {
  // "DAHZ", version 1, width 2, height 1, then 0.0f and 3.5f.
  const std::vector<std::uint8_t> bytes{'D', 'A', 'H', 'Z', 1, 0, 2, 0, 0, 0, 1, 0, 0, 0,
                                        0,   0,   0,   0,   0, 0, 0x60, 0x40};
  const DepthMap dm = decode_raw_depth(bytes);
  ASSERT_EQ(dm.width(), 2);
  ASSERT_EQ(dm.height(), 1);
  EXPECT_EQ(dm.at(0, 0), 0.0f);
  EXPECT_EQ(dm.at(1, 0), 3.5f);
  EXPECT_EQ(encode_raw_depth(dm), bytes);
}

TEST(RawDepth, Errors) {
  const DepthMap dm(3, 2, 1.5f);
  auto bytes = encode_raw_depth(dm);
  auto truncated = bytes;
  truncated.pop_back();
  EXPECT_THROW(decode_raw_depth(truncated), CorruptData);
  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  EXPECT_THROW(decode_raw_depth(bad_magic), CorruptData);
  auto bad_version = bytes;
  bad_version[4] = 9;
  EXPECT_THROW(decode_raw_depth(bad_version), CorruptData);
  auto negative = bytes;
  negative.back() |= 0x80;  // sign bit of the last value
  EXPECT_THROW(decode_raw_depth(negative), InvariantViolation);
}

TEST(RawDepth, FileRoundTripIsExact) {
  TempDir dir("io");
  const DepthMap dm = testing_support::desk_depth(3, 13, 4);
  save_raw_depth(dm, dir / "d.dahz");
  EXPECT_EQ(load_depth(dir / "d.dahz"), dm);
}

TEST(DepthPng, FullScaleMapsToScale) {
  TempDir dir("io");
  write_rgb8(dir / "d.png", 2, 1, {0xFF, 0xFF, 0x00, 0x00}, PNG_COLOR_TYPE_GRAY, 16);
  const DepthMap dm = load_depth_png16(dir / "d.png", 10.0);
  EXPECT_EQ(dm.at(0, 0), 10.0f);
  EXPECT_EQ(dm.at(1, 0), 0.0f);
  EXPECT_EQ(load_depth(dir / "d.png", {10.0}), dm);
  EXPECT_THROW(load_depth(dir / "d.png"), InvalidArgument);
}

TEST(DepthPng, RoundTripWithinOneCode) {
  TempDir dir("io");
  const DepthMap dm = testing_support::desk_depth(5, 10, 1);
  save_depth_png16(dm, dir / "d.png", 12.0);
  const DepthMap back = load_depth_png16(dir / "d.png", 12.0);
  for (std::size_t i = 0; i < dm.pixel_count(); ++i)
    EXPECT_LE(std::abs(back.values()[i] - dm.values()[i]), 12.0 / 65535.0 + 1e-6);
}
