#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "dahaze/image.hpp"

namespace dahaze {

// PNG stills. load_image accepts 8- or 16-bit RGB and divides by the format's
// maximum code value. save_image always writes 8-bit RGB, rounding to the
// nearest code, so a round trip is exact to within 1/255 per sample.
Image load_image(const std::filesystem::path& path);
void save_image(const Image& img, const std::filesystem::path& path);

// In-memory encode used by save_image; exposed for byte-level determinism
// checks.
std::vector<std::uint8_t> encode_png(const Image& img);

// Raw depth container: "DAHZ", u16 version (1), u32 width, u32 height, then
// width * height f32 values, all little-endian, row-major.
inline constexpr std::uint16_t kRawDepthVersion = 1;
std::vector<std::uint8_t> encode_raw_depth(const DepthMap& dm);
DepthMap decode_raw_depth(std::span<const std::uint8_t> bytes);
void save_raw_depth(const DepthMap& dm, const std::filesystem::path& path);

// 16-bit grayscale PNG, code v mapped to v / 65535 * scale. scale must be
// given explicitly; there is no default unit.
DepthMap load_depth_png16(const std::filesystem::path& path, double scale);
void save_depth_png16(const DepthMap& dm, const std::filesystem::path& path, double scale);

struct DepthLoadOptions {
  // Required when the file is a PNG; ignored for raw files.
  double png_scale = 0.0;
};

// Dispatches on the file's leading bytes: raw container or 16-bit PNG.
DepthMap load_depth(const std::filesystem::path& path, const DepthLoadOptions& options = {});

// Whole-file helpers shared by the raw containers.
std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace dahaze
