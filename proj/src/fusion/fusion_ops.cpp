#include "dahaze/fusion/fusion_ops.hpp"

#include <string>

#include "dahaze/error.hpp"

namespace dahaze::fusion {

std::string_view to_string(FusionKind kind) noexcept {
  switch (kind) {
    case FusionKind::add: return "add";
    case FusionKind::concat: return "concat";
    case FusionKind::csc: return "csc";
  }
  return "?";
}

FusionKind parse_fusion_kind(std::string_view s) {
  if (s == "add") return FusionKind::add;
  if (s == "concat" || s == "cat") return FusionKind::concat;
  if (s == "csc") return FusionKind::csc;
  throw InvalidArgument("unknown fusion kind '" + std::string(s) + "'");
}

namespace {

template <typename T>
void require_pair(const Tensor<T>& x, const Tensor<T>& y, const char* what) {
  if (!x.same_shape(y)) throw InvalidArgument(std::string(what) + ": x and y differ in shape");
}

}  // namespace

template <std::floating_point T>
Tensor<T> fuse_add(const Tensor<T>& x, const Tensor<T>& y, const KernelSet<T>& k, Padding padding) {
  require_pair(x, y, "fuse_add");
  return conv2d(x, k, padding) + conv2d(y, k, padding);
}

template <std::floating_point T>
Tensor<T> fuse_concat(const Tensor<T>& x, const Tensor<T>& y, const KernelSet<T>& k2c, Padding padding) {
  require_pair(x, y, "fuse_concat");
  const int c = x.channels();
  if (k2c.in_channels() != 2 * c) {
    throw InvalidArgument("fuse_concat: kernels need " + std::to_string(2 * c) + " input channels, have " +
                          std::to_string(k2c.in_channels()));
  }
  return conv2d(x, slice_in_channels(k2c, 0, c), padding) + conv2d(y, slice_in_channels(k2c, c, c), padding);
}

template <std::floating_point T>
Tensor<T> fuse_csc(const Tensor<T>& x, const Tensor<T>& y, const KernelSet<T>& k, const KernelSet<T>& k_hat,
                   Padding padding) {
  require_pair(x, y, "fuse_csc");
  if (!k.same_shape(k_hat)) throw InvalidArgument("fuse_csc: k and k_hat differ in shape");
  return fuse_add(x, y, k, padding) + conv2d(y, k_hat, padding);
}

template <std::floating_point T>
CscKernels<T> csc_from_concat(const KernelSet<T>& k2c) {
  if (k2c.in_channels() % 2 != 0) {
    throw InvalidArgument("csc_from_concat: odd input channel count " + std::to_string(k2c.in_channels()));
  }
  const int c = k2c.in_channels() / 2;
  KernelSet<T> k = slice_in_channels(k2c, 0, c);
  KernelSet<T> k_hat = slice_in_channels(k2c, c, c) - k;
  return {std::move(k), std::move(k_hat)};
}

template <std::floating_point T>
KernelSet<T> concat_from_csc(const KernelSet<T>& k, const KernelSet<T>& k_hat) {
  if (!k.same_shape(k_hat)) throw InvalidArgument("concat_from_csc: k and k_hat differ in shape");
  return concat_in_channels(k, k + k_hat);
}

template <std::floating_point T>
FusionGrads<T> fuse_backward(FusionKind kind, const Tensor<T>& x, const Tensor<T>& y, const KernelSet<T>& k,
                             const KernelSet<T>& k_hat, const Tensor<T>& upstream, Padding padding) {
  require_pair(x, y, "fuse_backward");
  switch (kind) {
    case FusionKind::add: {
      auto bx = conv2d_backward(x, k, upstream, padding);
      auto by = conv2d_backward(y, k, upstream, padding);
      return {std::move(bx.grad_x), std::move(by.grad_x), bx.grad_k + by.grad_k, {}};
    }
    case FusionKind::concat: {
      const int c = x.channels();
      if (k.in_channels() != 2 * c) throw InvalidArgument("fuse_backward: concat kernels need 2c inputs");
      auto bx = conv2d_backward(x, slice_in_channels(k, 0, c), upstream, padding);
      auto by = conv2d_backward(y, slice_in_channels(k, c, c), upstream, padding);
      return {std::move(bx.grad_x), std::move(by.grad_x), concat_in_channels(bx.grad_k, by.grad_k), {}};
    }
    case FusionKind::csc: {
      if (!k.same_shape(k_hat)) throw InvalidArgument("fuse_backward: k and k_hat differ in shape");
      auto bx = conv2d_backward(x, k, upstream, padding);
      auto by = conv2d_backward(y, k, upstream, padding);
      auto bh = conv2d_backward(y, k_hat, upstream, padding);
      return {std::move(bx.grad_x), by.grad_x + bh.grad_x, bx.grad_k + by.grad_k, std::move(bh.grad_k)};
    }
  }
  throw InvalidArgument("fuse_backward: unknown fusion kind");
}

#define DAHAZE_INSTANTIATE(T)                                                                                 \
  template Tensor<T> fuse_add<T>(const Tensor<T>&, const Tensor<T>&, const KernelSet<T>&, Padding);          \
  template Tensor<T> fuse_concat<T>(const Tensor<T>&, const Tensor<T>&, const KernelSet<T>&, Padding);       \
  template Tensor<T> fuse_csc<T>(const Tensor<T>&, const Tensor<T>&, const KernelSet<T>&, const KernelSet<T>&, \
                                 Padding);                                                                    \
  template CscKernels<T> csc_from_concat<T>(const KernelSet<T>&);                                             \
  template KernelSet<T> concat_from_csc<T>(const KernelSet<T>&, const KernelSet<T>&);                         \
  template FusionGrads<T> fuse_backward<T>(FusionKind, const Tensor<T>&, const Tensor<T>&, const KernelSet<T>&, \
                                           const KernelSet<T>&, const Tensor<T>&, Padding);

DAHAZE_INSTANTIATE(float)
DAHAZE_INSTANTIATE(double)

#undef DAHAZE_INSTANTIATE

}  // namespace dahaze::fusion
