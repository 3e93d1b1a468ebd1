#pragma once

#include <concepts>
#include <cstddef>
#include <span>
#include <vector>

namespace dahaze {

/// H x W x 3 raster with samples in [0, 1], row-major, channel-interleaved.
///
/// The sample type is a template parameter so the haze model can be evaluated
/// in 32-bit (file I/O, batch synthesis) or 64-bit (verification) arithmetic.
/// Construction validates the range invariant; instances are immutable apart
/// from move/assignment.
template <std::floating_point T>
class BasicImage {
 public:
  static constexpr int kChannels = 3;

  BasicImage() = default;
  BasicImage(int width, int height, T fill);
  // Throws InvalidArgument on a size mismatch or a sample outside [0, 1].
  BasicImage(int width, int height, std::vector<T> samples);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }
  std::span<const T> samples() const noexcept { return samples_; }

  T at(int x, int y, int c) const noexcept {
    return samples_[(static_cast<std::size_t>(y) * width_ + x) * kChannels + c];
  }

  bool same_shape(const BasicImage& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }

  template <std::floating_point U>
  BasicImage<U> cast() const {
    return BasicImage<U>(width_, height_, std::vector<U>(samples_.begin(), samples_.end()));
  }

  friend bool operator==(const BasicImage&, const BasicImage&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<T> samples_;
};

using Image = BasicImage<float>;
using ImageF64 = BasicImage<double>;

/// H x W field of finite, non-negative depths in whatever unit the source
/// used. Pairs with any image of any size; see resize_bilinear.
class DepthMap {
 public:
  DepthMap() = default;
  DepthMap(int width, int height, float fill);
  // Throws InvalidArgument on a size mismatch, InvariantViolation on a
  // negative or non-finite value.
  DepthMap(int width, int height, std::vector<float> values);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }
  std::span<const float> values() const noexcept { return values_; }
  float at(int x, int y) const noexcept {
    return values_[static_cast<std::size_t>(y) * width_ + x];
  }

  float min_value() const noexcept;
  float max_value() const noexcept;

  friend bool operator==(const DepthMap&, const DepthMap&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<float> values_;
};

// Bilinear resample with centre-aligned coordinates: output index i reads
// source coordinate (i + 0.5) * src / dst - 0.5, clamped to the edge.
DepthMap resize_bilinear(const DepthMap& dm, int width, int height);

// Linear rescale so the maximum becomes d_max. Throws InvalidArgument for an
// all-zero map or a non-positive d_max.
DepthMap normalize_depth(const DepthMap& dm, float d_max);

// Per-sample |a - b|.
Image diff_image(const Image& a, const Image& b);

// Per-sample 0.5 + (a - b) / 2, the signed difference visualisation where
// mid-grey means no change.
Image signed_diff_image(const Image& a, const Image& b);

}  // namespace dahaze
