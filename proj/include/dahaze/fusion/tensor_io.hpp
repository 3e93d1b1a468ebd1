#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "dahaze/fusion/tensor.hpp"

namespace dahaze::fusion {

// Fixture container: "DAHT", u16 version (1), u16 channels, u32 height,
// u32 width, then channels * height * width f32 values, little-endian.
inline constexpr std::uint16_t kTensorFileVersion = 1;

std::vector<std::uint8_t> encode_tensor(const Tensor<double>& t);
Tensor<double> decode_tensor(std::span<const std::uint8_t> bytes);

// Kernel banks reuse the container with channels = out * in; out_channels
// recovers the split on load.
std::vector<std::uint8_t> encode_kernels(const KernelSet<double>& k);
KernelSet<double> decode_kernels(std::span<const std::uint8_t> bytes, int out_channels);

void save_tensor(const Tensor<double>& t, const std::filesystem::path& path);
Tensor<double> load_tensor(const std::filesystem::path& path);

}  // namespace dahaze::fusion
