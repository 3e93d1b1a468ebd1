#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>

#include "dahaze/image.hpp"

namespace dahaze {

// 10 * log10(1 / MSE) over all samples, MAX = 1. Returns +infinity when the
// images are identical.
double psnr(const Image& a, const Image& b);

// Mean SSIM over every valid 11x11 Gaussian window (sigma 1.5), computed on
// luma 0.299R + 0.587G + 0.114B with C1 = 0.01^2 and C2 = 0.03^2. Both sides
// must be at least 11 pixels.
double ssim(const Image& a, const Image& b);

/// Aggregate over one test set.
struct SetResult {
  std::string set_name;
  // Mean over pairs with finite PSNR; +infinity if every pair was identical.
  double mean_psnr = 0.0;
  double mean_ssim = 0.0;
  std::size_t count = 0;
  std::size_t infinite_psnr_count = 0;
};

// Pairs files with the same name in both directories (PNG only). Throws
// InvalidArgument when no names match.
SetResult evaluate_set(const std::filesystem::path& restored_dir,
                       const std::filesystem::path& gt_dir, const std::string& set_name = "set",
                       int workers = 1);

// Population variance of per-set mean PSNRs; each set counts once regardless
// of its size. Needs at least two values.
double discrepancy(std::span<const double> set_means);

// "<name>\tpsnr=<dB>\tssim=<val>\tcount=<n>"; psnr prints "inf" when infinite.
std::string format_set_line(const SetResult& r);
std::string format_discrepancy_line(double value);

}  // namespace dahaze
