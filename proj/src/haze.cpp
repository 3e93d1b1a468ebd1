#include "dahaze/haze.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dahaze/error.hpp"

namespace dahaze {

void HazeParams::validate() const {
  if (!std::isfinite(A) || A < 0.0 || A > 1.0) {
    throw InvalidArgument("atmospheric light must lie in [0,1], got " + std::to_string(A));
  }
  if (!std::isfinite(beta) || beta < 0.0) {
    throw InvalidArgument("scattering coefficient must be finite and >= 0, got " + std::to_string(beta));
  }
}

void ParamSpace::validate() const {
  if (a_set.empty()) throw InvalidArgument("atmospheric light set is empty");
  if (beta_set.empty()) throw InvalidArgument("scattering coefficient set is empty");
  for (double a : a_set) HazeParams{a, 0.0}.validate();
  for (double b : beta_set) HazeParams{0.0, b}.validate();
}

bool ParamSpace::contains(const HazeParams& p) const noexcept {
  return std::find(a_set.begin(), a_set.end(), p.A) != a_set.end() &&
         std::find(beta_set.begin(), beta_set.end(), p.beta) != beta_set.end();
}

HazeParams sample_params(Rng& rng, const ParamSpace& space) {
  space.validate();
  HazeParams p;
  p.A = space.a_set[rng.below(space.a_set.size())];
  p.beta = space.beta_set[rng.below(space.beta_set.size())];
  return p;
}

template <std::floating_point T>
BasicTransmissionMap<T>::BasicTransmissionMap(int width, int height, std::vector<T> values)
    : width_(width), height_(height), values_(std::move(values)) {
  if (width < 1 || height < 1 ||
      values_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw InvalidArgument("transmission map: size mismatch");
  }
  for (T v : values_) {
    if (!(v >= static_cast<T>(kMinTransmission) && v <= T{1})) {
      throw InvariantViolation("transmission map: value outside [t_min, 1]");
    }
  }
}

template <std::floating_point T>
BasicTransmissionMap<T> transmission(const DepthMap& dm, double beta) {
  if (!std::isfinite(beta)) throw InvalidArgument("transmission: beta is not finite");
  if (beta < 0.0) throw InvalidArgument("transmission: beta must be >= 0");
  const T t_min = static_cast<T>(kMinTransmission);
  std::vector<T> t(dm.pixel_count());
  const auto d = dm.values();
  for (std::size_t i = 0; i < t.size(); ++i) {
    const T v = static_cast<T>(std::exp(-beta * static_cast<double>(d[i])));
    t[i] = std::clamp(v, t_min, T{1});
  }
  return BasicTransmissionMap<T>(dm.width(), dm.height(), std::move(t));
}

namespace {

template <std::floating_point T>
void require_same_size(const BasicImage<T>& img, const BasicTransmissionMap<T>& t, const char* what) {
  if (img.width() != t.width() || img.height() != t.height()) {
    throw InvalidArgument(std::string(what) + ": image " + std::to_string(img.width()) + "x" +
                          std::to_string(img.height()) + " vs transmission " +
                          std::to_string(t.width()) + "x" + std::to_string(t.height()));
  }
}

}  // namespace

template <std::floating_point T>
BasicImage<T> compose_haze(const BasicImage<T>& clear, const BasicTransmissionMap<T>& t, double A) {
  require_same_size(clear, t, "compose_haze");
  HazeParams{A, 0.0}.validate();
  const T a = static_cast<T>(A);
  const auto j = clear.samples();
  const auto tv = t.values();
  std::vector<T> out(j.size());
  for (std::size_t p = 0; p < tv.size(); ++p) {
    const T tp = tv[p];
    const T airlight = a * (T{1} - tp);
    for (int c = 0; c < 3; ++c) {
      const std::size_t i = p * 3 + c;
      // Convex combination of J and A; clamp removes last-bit overshoot only.
      out[i] = std::clamp(j[i] * tp + airlight, T{0}, T{1});
    }
  }
  return BasicImage<T>(clear.width(), clear.height(), std::move(out));
}

template <std::floating_point T>
BasicImage<T> invert_haze(const BasicImage<T>& hazy, const BasicTransmissionMap<T>& t, double A) {
  require_same_size(hazy, t, "invert_haze");
  HazeParams{A, 0.0}.validate();
  const T a = static_cast<T>(A);
  const auto in = hazy.samples();
  const auto tv = t.values();
  std::vector<T> out(in.size());
  for (std::size_t p = 0; p < tv.size(); ++p) {
    const T tp = tv[p];
    const T airlight = a * (T{1} - tp);
    for (int c = 0; c < 3; ++c) {
      const std::size_t i = p * 3 + c;
      out[i] = std::clamp((in[i] - airlight) / tp, T{0}, T{1});
    }
  }
  return BasicImage<T>(hazy.width(), hazy.height(), std::move(out));
}

template <std::floating_point T>
std::vector<T> haze_density_map(const BasicTransmissionMap<T>& t) {
  std::vector<T> out(t.values().size());
  std::transform(t.values().begin(), t.values().end(), out.begin(), [](T v) { return T{1} - v; });
  return out;
}

#define DAHAZE_INSTANTIATE(T)                                                                      \
  template class BasicTransmissionMap<T>;                                                          \
  template BasicTransmissionMap<T> transmission<T>(const DepthMap&, double);                       \
  template BasicImage<T> compose_haze<T>(const BasicImage<T>&, const BasicTransmissionMap<T>&,     \
                                         double);                                                  \
  template BasicImage<T> invert_haze<T>(const BasicImage<T>&, const BasicTransmissionMap<T>&,      \
                                        double);                                                   \
  template std::vector<T> haze_density_map<T>(const BasicTransmissionMap<T>&);

DAHAZE_INSTANTIATE(float)
DAHAZE_INSTANTIATE(double)

#undef DAHAZE_INSTANTIATE

}  // namespace dahaze
