#include "dahaze/fusion/tensor_io.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "../byte_io.hpp"
#include "dahaze/error.hpp"
#include "dahaze/image_io.hpp"

namespace dahaze::fusion {
namespace {

constexpr std::array<std::uint8_t, 4> kMagic{'D', 'A', 'H', 'T'};
constexpr std::size_t kHeaderSize = 4 + 2 + 2 + 4 + 4;

std::vector<std::uint8_t> encode_raw(int channels, int height, int width, std::span<const double> values) {
  if (channels > 0xFFFF) throw InvalidArgument("tensor file: more than 65535 channels");
  std::vector<std::uint8_t> out(kMagic.begin(), kMagic.end());
  out.reserve(kHeaderSize + values.size() * 4);
  byteio::put_u16(out, kTensorFileVersion);
  byteio::put_u16(out, static_cast<std::uint16_t>(channels));
  byteio::put_u32(out, static_cast<std::uint32_t>(height));
  byteio::put_u32(out, static_cast<std::uint32_t>(width));
  for (double v : values) byteio::put_f32(out, static_cast<float>(v));
  return out;
}

struct Raw {
  int channels;
  int height;
  int width;
  std::vector<double> values;
};

Raw decode_raw(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderSize) throw CorruptData("tensor file: truncated header");
  if (!std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) throw CorruptData("tensor file: bad magic");
  const auto version = byteio::get_u16(bytes, 4);
  if (version != kTensorFileVersion) throw CorruptData("tensor file: unsupported version " + std::to_string(version));
  const auto channels = byteio::get_u16(bytes, 6);
  const auto height = byteio::get_u32(bytes, 8);
  const auto width = byteio::get_u32(bytes, 12);
  if (channels == 0 || height == 0 || width == 0 || height > 0x7FFFFFFF || width > 0x7FFFFFFF) {
    throw CorruptData("tensor file: bad dimensions");
  }
  const std::uint64_t count = std::uint64_t{channels} * height * width;
  if (bytes.size() - kHeaderSize != count * 4) throw CorruptData("tensor file: payload size mismatch");
  Raw raw{channels, static_cast<int>(height), static_cast<int>(width), std::vector<double>(count)};
  for (std::uint64_t i = 0; i < count; ++i) raw.values[i] = byteio::get_f32(bytes, kHeaderSize + 4 * i);
  return raw;
}

}  // namespace

std::vector<std::uint8_t> encode_tensor(const Tensor<double>& t) {
  return encode_raw(t.channels(), t.height(), t.width(), t.data());
}

Tensor<double> decode_tensor(std::span<const std::uint8_t> bytes) {
  Raw raw = decode_raw(bytes);
  return Tensor<double>(raw.channels, raw.height, raw.width, std::move(raw.values));
}

std::vector<std::uint8_t> encode_kernels(const KernelSet<double>& k) {
  return encode_raw(k.out_channels() * k.in_channels(), k.kh(), k.kw(), k.weights());
}

KernelSet<double> decode_kernels(std::span<const std::uint8_t> bytes, int out_channels) {
  Raw raw = decode_raw(bytes);
  if (out_channels < 1 || raw.channels % out_channels != 0) {
    throw CorruptData("kernel file: channel count not divisible by out_channels");
  }
  return KernelSet<double>(out_channels, raw.channels / out_channels, raw.height, raw.width, std::move(raw.values));
}

void save_tensor(const Tensor<double>& t, const std::filesystem::path& path) {
  write_file_bytes(path, encode_tensor(t));
}

Tensor<double> load_tensor(const std::filesystem::path& path) { return decode_tensor(read_file_bytes(path)); }

}  // namespace dahaze::fusion
