#include "dahaze/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dahaze/error.hpp"

namespace dahaze {
namespace {

void check_dims(int width, int height, const char* what) {
  if (width < 1 || height < 1) {
    throw InvalidArgument(std::string(what) + ": dimensions must be positive, got " +
                          std::to_string(width) + "x" + std::to_string(height));
  }
}

}  // namespace

template <std::floating_point T>
BasicImage<T>::BasicImage(int width, int height, T fill)
    : BasicImage(width, height,
                 std::vector<T>(static_cast<std::size_t>(std::max(width, 0)) *
                                    static_cast<std::size_t>(std::max(height, 0)) * kChannels,
                                fill)) {}

template <std::floating_point T>
BasicImage<T>::BasicImage(int width, int height, std::vector<T> samples)
    : width_(width), height_(height), samples_(std::move(samples)) {
  check_dims(width, height, "image");
  if (samples_.size() != pixel_count() * kChannels) {
    throw InvalidArgument("image: expected " + std::to_string(pixel_count() * kChannels) +
                          " samples, got " + std::to_string(samples_.size()));
  }
  for (T s : samples_) {
    if (!(s >= T{0} && s <= T{1})) {
      throw InvalidArgument("image: sample outside [0,1]: " + std::to_string(s));
    }
  }
}

template class BasicImage<float>;
template class BasicImage<double>;

DepthMap::DepthMap(int width, int height, float fill)
    : DepthMap(width, height,
               std::vector<float>(static_cast<std::size_t>(std::max(width, 0)) *
                                      static_cast<std::size_t>(std::max(height, 0)),
                                  fill)) {}

DepthMap::DepthMap(int width, int height, std::vector<float> values)
    : width_(width), height_(height), values_(std::move(values)) {
  check_dims(width, height, "depth map");
  if (values_.size() != pixel_count()) {
    throw InvalidArgument("depth map: expected " + std::to_string(pixel_count()) +
                          " values, got " + std::to_string(values_.size()));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const float v = values_[i];
    if (!std::isfinite(v) || v < 0.0f) {
      throw InvariantViolation("depth map: value at index " + std::to_string(i) +
                               " is negative or non-finite");
    }
  }
}

float DepthMap::min_value() const noexcept { return *std::min_element(values_.begin(), values_.end()); }
float DepthMap::max_value() const noexcept { return *std::max_element(values_.begin(), values_.end()); }

DepthMap resize_bilinear(const DepthMap& dm, int width, int height) {
  if (width < 1 || height < 1) throw InvalidArgument("resize_bilinear: zero target dimension");
  if (width == dm.width() && height == dm.height()) return dm;

  const double sx = static_cast<double>(dm.width()) / width;
  const double sy = static_cast<double>(dm.height()) / height;
  const int max_x = dm.width() - 1;
  const int max_y = dm.height() - 1;

  std::vector<float> out(static_cast<std::size_t>(width) * height);
  for (int y = 0; y < height; ++y) {
    const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, static_cast<double>(max_y));
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, max_y);
    const double wy = fy - y0;
    for (int x = 0; x < width; ++x) {
      const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, static_cast<double>(max_x));
      const int x0 = static_cast<int>(fx);
      const int x1 = std::min(x0 + 1, max_x);
      const double wx = fx - x0;
      const double top = (1.0 - wx) * dm.at(x0, y0) + wx * dm.at(x1, y0);
      const double bottom = (1.0 - wx) * dm.at(x0, y1) + wx * dm.at(x1, y1);
      double v = (1.0 - wy) * top + wy * bottom;
      // Convex weights; the clamp only absorbs rounding in the last bit.
      v = std::clamp(v, static_cast<double>(dm.min_value()), static_cast<double>(dm.max_value()));
      out[static_cast<std::size_t>(y) * width + x] = static_cast<float>(v);
    }
  }
  return DepthMap(width, height, std::move(out));
}

DepthMap normalize_depth(const DepthMap& dm, float d_max) {
  if (!(d_max > 0.0f) || !std::isfinite(d_max)) {
    throw InvalidArgument("normalize_depth: d_max must be positive and finite");
  }
  const float current = dm.max_value();
  if (current <= 0.0f) throw InvalidArgument("normalize_depth: depth map is all zero");
  if (current == d_max) return dm;

  std::vector<float> out(dm.values().begin(), dm.values().end());
  for (float& v : out) {
    // v / max is exactly 1 at the maximum, so the new maximum is exactly d_max.
    v = static_cast<float>(static_cast<double>(v) / current * d_max);
  }
  return DepthMap(dm.width(), dm.height(), std::move(out));
}

namespace {

template <typename Fn>
Image combine(const Image& a, const Image& b, const char* what, Fn fn) {
  if (!a.same_shape(b)) {
    throw InvalidArgument(std::string(what) + ": dimension mismatch " + std::to_string(a.width()) +
                          "x" + std::to_string(a.height()) + " vs " + std::to_string(b.width()) +
                          "x" + std::to_string(b.height()));
  }
  const auto sa = a.samples();
  const auto sb = b.samples();
  std::vector<float> out(sa.size());
  for (std::size_t i = 0; i < sa.size(); ++i) out[i] = std::clamp(fn(sa[i], sb[i]), 0.0f, 1.0f);
  return Image(a.width(), a.height(), std::move(out));
}

}  // namespace

Image diff_image(const Image& a, const Image& b) {
  return combine(a, b, "diff_image", [](float x, float y) { return std::fabs(x - y); });
}

Image signed_diff_image(const Image& a, const Image& b) {
  return combine(a, b, "signed_diff_image", [](float x, float y) { return 0.5f + 0.5f * (x - y); });
}

}  // namespace dahaze
