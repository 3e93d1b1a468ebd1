#pragma once

#include <concepts>
#include <span>
#include <vector>

#include "dahaze/image.hpp"
#include "dahaze/rng.hpp"

namespace dahaze {

// Lower clamp on transmission; keeps invert_haze well conditioned.
inline constexpr double kMinTransmission = 0.01;

/// Global atmospheric light (one scalar for all channels) and scattering
/// coefficient for one synthesis.
struct HazeParams {
  double A = 1.0;
  double beta = 0.1;

  // A in [0, 1]; beta finite and >= 0. beta == 0 is the haze-free identity.
  void validate() const;
  friend bool operator==(const HazeParams&, const HazeParams&) = default;
};

/// Finite sets that A and beta are drawn from. The defaults are a conventional
/// outdoor grid, not values tied to any published dataset.
struct ParamSpace {
  std::vector<double> a_set{0.8, 0.85, 0.9, 0.95, 1.0};
  std::vector<double> beta_set{0.04, 0.06, 0.08, 0.1, 0.12, 0.16, 0.2};

  // Throws InvalidArgument if either set is empty or holds an invalid value.
  void validate() const;
  bool contains(const HazeParams& p) const noexcept;
};

// One draw: A uniformly from a_set, then beta uniformly from beta_set.
HazeParams sample_params(Rng& rng, const ParamSpace& space);

/// Per-pixel transmission with every value in [kMinTransmission, 1].
template <std::floating_point T>
class BasicTransmissionMap {
 public:
  BasicTransmissionMap() = default;
  // Throws InvariantViolation if a value falls outside [kMinTransmission, 1].
  BasicTransmissionMap(int width, int height, std::vector<T> values);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::span<const T> values() const noexcept { return values_; }
  T at(int x, int y) const noexcept { return values_[static_cast<std::size_t>(y) * width_ + x]; }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<T> values_;
};

using TransmissionMap = BasicTransmissionMap<float>;
using TransmissionMapF64 = BasicTransmissionMap<double>;

// t = exp(-beta * d) clamped to [kMinTransmission, 1]. Works the same for an
// aligned depth map and for a shuffled one.
template <std::floating_point T>
BasicTransmissionMap<T> transmission(const DepthMap& dm, double beta);

// I = J * t + A * (1 - t), per pixel and channel.
template <std::floating_point T>
BasicImage<T> compose_haze(const BasicImage<T>& clear, const BasicTransmissionMap<T>& t, double A);

// J = (I - A * (1 - t)) / t, clamped to [0, 1].
template <std::floating_point T>
BasicImage<T> invert_haze(const BasicImage<T>& hazy, const BasicTransmissionMap<T>& t, double A);

// Haze density 1 - t, row-major, values in [0, 1 - kMinTransmission].
template <std::floating_point T>
std::vector<T> haze_density_map(const BasicTransmissionMap<T>& t);

}  // namespace dahaze
