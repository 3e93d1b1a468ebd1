#include "dahaze/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <csetjmp>
#include <cstring>
#include <fstream>
#include <memory>
#include <string>

#include "dahaze/error.hpp"
#include "byte_io.hpp"

namespace dahaze {
namespace fs = std::filesystem;

std::vector<std::uint8_t> read_file_bytes(const fs::path& path) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) throw FileNotFound("no such file: " + path.string());
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFound("cannot open: " + path.string());
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

void write_file_bytes(const fs::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw UnwritablePath("cannot write: " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw UnwritablePath("write failed: " + path.string());
}

namespace {

// ---------------------------------------------------------------------------
// libpng glue. Decoder/encoder state lives on the heap and is only touched
// through a pointer, so a longjmp out of libpng never leaves a modified local
// behind.

struct PngRaster {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  int bit_depth = 0;
  int color_type = 0;
  std::vector<std::uint8_t> pixels;  // rows packed, 16-bit samples big-endian
};

struct PngReadState {
  std::span<const std::uint8_t> bytes;
  std::size_t offset = 0;
  std::string error;
  PngRaster raster;
  std::vector<png_bytep> rows;
};

void png_error_to_state(png_structp png, png_const_charp msg) {
  auto* state = static_cast<PngReadState*>(png_get_error_ptr(png));
  state->error = msg;
  png_longjmp(png, 1);
}

void png_warning_ignore(png_structp, png_const_charp) {}

void png_read_from_state(png_structp png, png_bytep out, png_size_t length) {
  auto* state = static_cast<PngReadState*>(png_get_io_ptr(png));
  if (state->offset + length > state->bytes.size()) {
    png_error(png, "unexpected end of stream");
  }
  std::memcpy(out, state->bytes.data() + state->offset, length);
  state->offset += length;
}

// Returns 0 on success, 1 on a libpng error, 2 for an unsupported layout.
// `accept` decides which (bit depth, colour type) combinations are read.
int decode_png_raw(PngReadState* state, bool (*accept)(int bit_depth, int color_type)) {
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, state, png_error_to_state, png_warning_ignore);
  if (png == nullptr) {
    state->error = "png_create_read_struct failed";
    return 1;
  }
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    state->error = "png_create_info_struct failed";
    return 1;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    return 1;
  }
  png_set_read_fn(png, state, png_read_from_state);
  png_read_info(png, info);

  state->raster.width = png_get_image_width(png, info);
  state->raster.height = png_get_image_height(png, info);
  state->raster.bit_depth = png_get_bit_depth(png, info);
  state->raster.color_type = png_get_color_type(png, info);
  if (!accept(state->raster.bit_depth, state->raster.color_type)) {
    png_destroy_read_struct(&png, &info, nullptr);
    return 2;
  }
  png_set_interlace_handling(png);
  png_read_update_info(png, info);

  const std::size_t rowbytes = png_get_rowbytes(png, info);
  state->raster.pixels.assign(rowbytes * state->raster.height, 0);
  state->rows.resize(state->raster.height);
  for (std::uint32_t y = 0; y < state->raster.height; ++y) {
    state->rows[y] = state->raster.pixels.data() + y * rowbytes;
  }
  png_read_image(png, state->rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return 0;
}

PngRaster decode_png(std::span<const std::uint8_t> bytes, const fs::path& path,
                     bool (*accept)(int, int), const char* wanted) {
  static constexpr std::array<std::uint8_t, 8> kSignature{0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
  if (bytes.size() < kSignature.size() ||
      !std::equal(kSignature.begin(), kSignature.end(), bytes.begin())) {
    throw CorruptData(path.string() + ": not a PNG stream");
  }
  auto state = std::make_unique<PngReadState>();
  state->bytes = bytes;
  const int rc = decode_png_raw(state.get(), accept);
  if (rc == 2) {
    throw UnsupportedFormat(path.string() + ": expected " + wanted + ", got bit depth " +
                            std::to_string(state->raster.bit_depth) + " colour type " +
                            std::to_string(state->raster.color_type));
  }
  if (rc != 0) throw CorruptData(path.string() + ": " + state->error);
  return std::move(state->raster);
}

bool accept_rgb(int bit_depth, int color_type) {
  return color_type == PNG_COLOR_TYPE_RGB && (bit_depth == 8 || bit_depth == 16);
}

bool accept_gray16(int bit_depth, int color_type) {
  return color_type == PNG_COLOR_TYPE_GRAY && bit_depth == 16;
}

struct PngWriteState {
  std::vector<std::uint8_t> out;
  std::string error;
};

void png_write_error(png_structp png, png_const_charp msg) {
  auto* state = static_cast<PngWriteState*>(png_get_error_ptr(png));
  state->error = msg;
  png_longjmp(png, 1);
}

void png_write_to_state(png_structp png, png_bytep data, png_size_t length) {
  auto* state = static_cast<PngWriteState*>(png_get_io_ptr(png));
  state->out.insert(state->out.end(), data, data + length);
}

void png_flush_noop(png_structp) {}

// rows: packed rows of the given layout (16-bit samples big-endian).
int encode_png_raw(PngWriteState* state, const std::uint8_t* pixels, std::uint32_t width,
                   std::uint32_t height, int bit_depth, int color_type, std::size_t rowbytes) {
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, state, png_write_error, png_warning_ignore);
  if (png == nullptr) return 1;
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    return 1;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    return 1;
  }
  png_set_write_fn(png, state, png_write_to_state, png_flush_noop);
  png_set_compression_level(png, 6);
  png_set_IHDR(png, info, width, height, bit_depth, color_type, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (std::uint32_t y = 0; y < height; ++y) {
    png_write_row(png, const_cast<png_bytep>(pixels + y * rowbytes));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return 0;
}

std::vector<std::uint8_t> encode_png_checked(const std::vector<std::uint8_t>& pixels,
                                             std::uint32_t width, std::uint32_t height,
                                             int bit_depth, int color_type, std::size_t rowbytes) {
  auto state = std::make_unique<PngWriteState>();
  if (encode_png_raw(state.get(), pixels.data(), width, height, bit_depth, color_type, rowbytes) != 0) {
    throw IoError("PNG encode failed: " + state->error);
  }
  return std::move(state->out);
}

std::uint8_t quantize8(float s) { return static_cast<std::uint8_t>(std::lround(std::clamp(s, 0.0f, 1.0f) * 255.0f)); }

}  // namespace

Image load_image(const fs::path& path) {
  const auto bytes = read_file_bytes(path);
  const PngRaster r = decode_png(bytes, path, accept_rgb, "8- or 16-bit RGB");
  const std::size_t n = static_cast<std::size_t>(r.width) * r.height * 3;
  std::vector<float> samples(n);
  if (r.bit_depth == 8) {
    for (std::size_t i = 0; i < n; ++i) samples[i] = static_cast<float>(r.pixels[i] / 255.0);
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const unsigned v = (unsigned{r.pixels[2 * i]} << 8) | r.pixels[2 * i + 1];
      samples[i] = static_cast<float>(v / 65535.0);
    }
  }
  return Image(static_cast<int>(r.width), static_cast<int>(r.height), std::move(samples));
}

std::vector<std::uint8_t> encode_png(const Image& img) {
  std::vector<std::uint8_t> pixels(img.samples().size());
  std::transform(img.samples().begin(), img.samples().end(), pixels.begin(), quantize8);
  const auto w = static_cast<std::uint32_t>(img.width());
  return encode_png_checked(pixels, w, static_cast<std::uint32_t>(img.height()), 8,
                            PNG_COLOR_TYPE_RGB, std::size_t{w} * 3);
}

void save_image(const Image& img, const fs::path& path) { write_file_bytes(path, encode_png(img)); }

DepthMap load_depth_png16(const fs::path& path, double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw InvalidArgument("16-bit depth import needs a positive scale: " + path.string());
  }
  const auto bytes = read_file_bytes(path);
  const PngRaster r = decode_png(bytes, path, accept_gray16, "16-bit grayscale");
  const std::size_t n = static_cast<std::size_t>(r.width) * r.height;
  std::vector<float> values(n);
  for (std::size_t i = 0; i < n; ++i) {
    const unsigned v = (unsigned{r.pixels[2 * i]} << 8) | r.pixels[2 * i + 1];
    values[i] = static_cast<float>(v / 65535.0 * scale);
  }
  return DepthMap(static_cast<int>(r.width), static_cast<int>(r.height), std::move(values));
}

void save_depth_png16(const DepthMap& dm, const fs::path& path, double scale) {
  if (!(scale > 0.0)) throw InvalidArgument("save_depth_png16: scale must be positive");
  std::vector<std::uint8_t> pixels(dm.pixel_count() * 2);
  for (std::size_t i = 0; i < dm.pixel_count(); ++i) {
    const double code = std::clamp(dm.values()[i] / scale, 0.0, 1.0) * 65535.0;
    const auto v = static_cast<std::uint16_t>(std::lround(code));
    pixels[2 * i] = static_cast<std::uint8_t>(v >> 8);
    pixels[2 * i + 1] = static_cast<std::uint8_t>(v & 0xFF);
  }
  const auto w = static_cast<std::uint32_t>(dm.width());
  write_file_bytes(path, encode_png_checked(pixels, w, static_cast<std::uint32_t>(dm.height()), 16,
                                            PNG_COLOR_TYPE_GRAY, std::size_t{w} * 2));
}

// ---------------------------------------------------------------------------
// Raw depth container.

namespace {
constexpr std::array<std::uint8_t, 4> kDepthMagic{'D', 'A', 'H', 'Z'};
constexpr std::size_t kDepthHeaderSize = 4 + 2 + 4 + 4;
}  // namespace

std::vector<std::uint8_t> encode_raw_depth(const DepthMap& dm) {
  std::vector<std::uint8_t> out(kDepthMagic.begin(), kDepthMagic.end());
  out.reserve(kDepthHeaderSize + dm.pixel_count() * 4);
  byteio::put_u16(out, kRawDepthVersion);
  byteio::put_u32(out, static_cast<std::uint32_t>(dm.width()));
  byteio::put_u32(out, static_cast<std::uint32_t>(dm.height()));
  for (float v : dm.values()) byteio::put_f32(out, v);
  return out;
}

DepthMap decode_raw_depth(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kDepthHeaderSize) throw CorruptData("raw depth: truncated header");
  if (!std::equal(kDepthMagic.begin(), kDepthMagic.end(), bytes.begin())) {
    throw CorruptData("raw depth: bad magic");
  }
  const std::uint16_t version = byteio::get_u16(bytes, 4);
  if (version != kRawDepthVersion) {
    throw CorruptData("raw depth: unsupported version " + std::to_string(version));
  }
  const std::uint32_t width = byteio::get_u32(bytes, 6);
  const std::uint32_t height = byteio::get_u32(bytes, 10);
  if (width == 0 || height == 0 || width > 0x7FFFFFFF || height > 0x7FFFFFFF) {
    throw CorruptData("raw depth: bad dimensions");
  }
  const std::uint64_t count = std::uint64_t{width} * height;
  if (bytes.size() - kDepthHeaderSize < count * 4) throw CorruptData("raw depth: truncated payload");
  if (bytes.size() - kDepthHeaderSize > count * 4) throw CorruptData("raw depth: trailing bytes");

  std::vector<float> values(count);
  for (std::uint64_t i = 0; i < count; ++i) values[i] = byteio::get_f32(bytes, kDepthHeaderSize + 4 * i);
  return DepthMap(static_cast<int>(width), static_cast<int>(height), std::move(values));
}

void save_raw_depth(const DepthMap& dm, const fs::path& path) {
  write_file_bytes(path, encode_raw_depth(dm));
}

DepthMap load_depth(const fs::path& path, const DepthLoadOptions& options) {
  const auto bytes = read_file_bytes(path);
  if (bytes.size() >= 4 && std::equal(kDepthMagic.begin(), kDepthMagic.end(), bytes.begin())) {
    return decode_raw_depth(bytes);
  }
  if (bytes.size() >= 4 && bytes[0] == 0x89 && bytes[1] == 'P' && bytes[2] == 'N' && bytes[3] == 'G') {
    return load_depth_png16(path, options.png_scale);
  }
  throw CorruptData(path.string() + ": neither a raw depth file nor a PNG");
}

}  // namespace dahaze
