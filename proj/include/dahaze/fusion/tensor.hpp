#pragma once

#include <concepts>
#include <cstddef>
#include <span>
#include <vector>

namespace dahaze::fusion {

/// C x H x W activations, channel-major then row-major.
template <std::floating_point T>
class Tensor {
 public:
  Tensor() = default;
  Tensor(int channels, int height, int width, T fill = T{0});
  // Throws InvalidArgument on a size mismatch or a non-finite value.
  Tensor(int channels, int height, int width, std::vector<T> data);

  int channels() const noexcept { return c_; }
  int height() const noexcept { return h_; }
  int width() const noexcept { return w_; }
  std::size_t size() const noexcept { return data_.size(); }

  std::span<T> data() noexcept { return data_; }
  std::span<const T> data() const noexcept { return data_; }

  std::size_t index(int c, int y, int x) const noexcept {
    return (static_cast<std::size_t>(c) * h_ + y) * w_ + x;
  }
  T& operator()(int c, int y, int x) noexcept { return data_[index(c, y, x)]; }
  T operator()(int c, int y, int x) const noexcept { return data_[index(c, y, x)]; }

  bool same_shape(const Tensor& o) const noexcept { return c_ == o.c_ && h_ == o.h_ && w_ == o.w_; }

  Tensor& operator+=(const Tensor& o);
  Tensor& operator-=(const Tensor& o);
  friend Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
  friend Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  int c_ = 0;
  int h_ = 0;
  int w_ = 0;
  std::vector<T> data_;
};

/// O x C x KH x KW convolution weights.
template <std::floating_point T>
class KernelSet {
 public:
  KernelSet() = default;
  KernelSet(int out_channels, int in_channels, int kh, int kw, T fill = T{0});
  KernelSet(int out_channels, int in_channels, int kh, int kw, std::vector<T> weights);

  int out_channels() const noexcept { return o_; }
  int in_channels() const noexcept { return c_; }
  int kh() const noexcept { return kh_; }
  int kw() const noexcept { return kw_; }
  std::size_t size() const noexcept { return w_.size(); }

  std::span<T> weights() noexcept { return w_; }
  std::span<const T> weights() const noexcept { return w_; }

  std::size_t index(int o, int c, int i, int j) const noexcept {
    return ((static_cast<std::size_t>(o) * c_ + c) * kh_ + i) * kw_ + j;
  }
  T& operator()(int o, int c, int i, int j) noexcept { return w_[index(o, c, i, j)]; }
  T operator()(int o, int c, int i, int j) const noexcept { return w_[index(o, c, i, j)]; }

  bool same_shape(const KernelSet& k) const noexcept {
    return o_ == k.o_ && c_ == k.c_ && kh_ == k.kh_ && kw_ == k.kw_;
  }

  KernelSet& operator+=(const KernelSet& k);
  KernelSet& operator-=(const KernelSet& k);
  friend KernelSet operator+(KernelSet a, const KernelSet& b) { return a += b; }
  friend KernelSet operator-(KernelSet a, const KernelSet& b) { return a -= b; }
  friend bool operator==(const KernelSet&, const KernelSet&) = default;

 private:
  int o_ = 0;
  int c_ = 0;
  int kh_ = 0;
  int kw_ = 0;
  std::vector<T> w_;
};

// [a; b] along channels.
template <std::floating_point T>
Tensor<T> concat_channels(const Tensor<T>& a, const Tensor<T>& b);

// [a; b] along input channels; both must share out_channels and kernel size.
template <std::floating_point T>
KernelSet<T> concat_in_channels(const KernelSet<T>& a, const KernelSet<T>& b);

// Input-channel slice [first, first + count).
template <std::floating_point T>
KernelSet<T> slice_in_channels(const KernelSet<T>& k, int first, int count);

}  // namespace dahaze::fusion
