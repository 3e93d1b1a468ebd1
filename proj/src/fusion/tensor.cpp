#include "dahaze/fusion/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dahaze/error.hpp"

namespace dahaze::fusion {
namespace {

std::size_t checked_count(std::initializer_list<int> dims, const char* what) {
  std::size_t n = 1;
  for (int d : dims) {
    if (d < 1) throw InvalidArgument(std::string(what) + ": dimensions must be positive");
    n *= static_cast<std::size_t>(d);
  }
  return n;
}

template <typename T>
void require_finite(std::span<const T> v, const char* what) {
  if (!std::all_of(v.begin(), v.end(), [](T x) { return std::isfinite(x); })) {
    throw InvalidArgument(std::string(what) + ": non-finite value");
  }
}

}  // namespace

template <std::floating_point T>
Tensor<T>::Tensor(int channels, int height, int width, T fill)
    : Tensor(channels, height, width,
             std::vector<T>(checked_count({channels, height, width}, "tensor"), fill)) {}

template <std::floating_point T>
Tensor<T>::Tensor(int channels, int height, int width, std::vector<T> data)
    : c_(channels), h_(height), w_(width), data_(std::move(data)) {
  if (data_.size() != checked_count({channels, height, width}, "tensor")) {
    throw InvalidArgument("tensor: expected " + std::to_string(checked_count({channels, height, width}, "tensor")) +
                          " values, got " + std::to_string(data_.size()));
  }
  require_finite<T>(data_, "tensor");
}

template <std::floating_point T>
Tensor<T>& Tensor<T>::operator+=(const Tensor& o) {
  if (!same_shape(o)) throw InvalidArgument("tensor +=: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

template <std::floating_point T>
Tensor<T>& Tensor<T>::operator-=(const Tensor& o) {
  if (!same_shape(o)) throw InvalidArgument("tensor -=: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

template <std::floating_point T>
KernelSet<T>::KernelSet(int out_channels, int in_channels, int kh, int kw, T fill)
    : KernelSet(out_channels, in_channels, kh, kw,
                std::vector<T>(checked_count({out_channels, in_channels, kh, kw}, "kernel set"), fill)) {}

template <std::floating_point T>
KernelSet<T>::KernelSet(int out_channels, int in_channels, int kh, int kw, std::vector<T> weights)
    : o_(out_channels), c_(in_channels), kh_(kh), kw_(kw), w_(std::move(weights)) {
  if (w_.size() != checked_count({out_channels, in_channels, kh, kw}, "kernel set")) {
    throw InvalidArgument("kernel set: weight count does not match shape");
  }
  require_finite<T>(w_, "kernel set");
}

template <std::floating_point T>
KernelSet<T>& KernelSet<T>::operator+=(const KernelSet& k) {
  if (!same_shape(k)) throw InvalidArgument("kernel +=: shape mismatch");
  for (std::size_t i = 0; i < w_.size(); ++i) w_[i] += k.w_[i];
  return *this;
}

template <std::floating_point T>
KernelSet<T>& KernelSet<T>::operator-=(const KernelSet& k) {
  if (!same_shape(k)) throw InvalidArgument("kernel -=: shape mismatch");
  for (std::size_t i = 0; i < w_.size(); ++i) w_[i] -= k.w_[i];
  return *this;
}

template <std::floating_point T>
Tensor<T> concat_channels(const Tensor<T>& a, const Tensor<T>& b) {
  if (a.height() != b.height() || a.width() != b.width()) {
    throw InvalidArgument("concat_channels: spatial size mismatch");
  }
  std::vector<T> data(a.data().begin(), a.data().end());
  data.insert(data.end(), b.data().begin(), b.data().end());
  return Tensor<T>(a.channels() + b.channels(), a.height(), a.width(), std::move(data));
}

template <std::floating_point T>
KernelSet<T> concat_in_channels(const KernelSet<T>& a, const KernelSet<T>& b) {
  if (a.out_channels() != b.out_channels() || a.kh() != b.kh() || a.kw() != b.kw()) {
    throw InvalidArgument("concat_in_channels: shape mismatch");
  }
  KernelSet<T> out(a.out_channels(), a.in_channels() + b.in_channels(), a.kh(), a.kw());
  for (int o = 0; o < a.out_channels(); ++o) {
    for (int i = 0; i < a.kh(); ++i) {
      for (int j = 0; j < a.kw(); ++j) {
        for (int c = 0; c < a.in_channels(); ++c) out(o, c, i, j) = a(o, c, i, j);
        for (int c = 0; c < b.in_channels(); ++c) out(o, a.in_channels() + c, i, j) = b(o, c, i, j);
      }
    }
  }
  return out;
}

template <std::floating_point T>
KernelSet<T> slice_in_channels(const KernelSet<T>& k, int first, int count) {
  if (first < 0 || count < 1 || first + count > k.in_channels()) {
    throw InvalidArgument("slice_in_channels: range out of bounds");
  }
  KernelSet<T> out(k.out_channels(), count, k.kh(), k.kw());
  for (int o = 0; o < k.out_channels(); ++o) {
    for (int c = 0; c < count; ++c) {
      for (int i = 0; i < k.kh(); ++i) {
        for (int j = 0; j < k.kw(); ++j) out(o, c, i, j) = k(o, first + c, i, j);
      }
    }
  }
  return out;
}

#define DAHAZE_INSTANTIATE(T)                                                            \
  template class Tensor<T>;                                                              \
  template class KernelSet<T>;                                                           \
  template Tensor<T> concat_channels<T>(const Tensor<T>&, const Tensor<T>&);             \
  template KernelSet<T> concat_in_channels<T>(const KernelSet<T>&, const KernelSet<T>&); \
  template KernelSet<T> slice_in_channels<T>(const KernelSet<T>&, int, int);

DAHAZE_INSTANTIATE(float)
DAHAZE_INSTANTIATE(double)

#undef DAHAZE_INSTANTIATE

}  // namespace dahaze::fusion
