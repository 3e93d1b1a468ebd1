#pragma once

#include <concepts>
#include <string_view>
#include <utility>

#include "dahaze/fusion/conv.hpp"
#include "dahaze/fusion/tensor.hpp"

namespace dahaze::fusion {

enum class FusionKind { add, concat, csc };

std::string_view to_string(FusionKind kind) noexcept;
FusionKind parse_fusion_kind(std::string_view s);

// Skip features x and up-sampled features y share one kernel bank:
//   Z = sum_i X_i * K_i + sum_i Y_i * K_i
template <std::floating_point T>
Tensor<T> fuse_add(const Tensor<T>& x, const Tensor<T>& y, const KernelSet<T>& k,
                   Padding padding = Padding::same);

// k2c has 2c input channels; the first c see x, the rest see y:
//   Z = sum_i X_i * K_i + sum_i Y_i * K_{i+c}
template <std::floating_point T>
Tensor<T> fuse_concat(const Tensor<T>& x, const Tensor<T>& y, const KernelSet<T>& k2c,
                      Padding padding = Padding::same);

// Add-style fusion with one extra convolution k_hat on the y branch:
//   Z = sum_i X_i * K_i + sum_i Y_i * K_i + sum_i Y_i * Khat_i
template <std::floating_point T>
Tensor<T> fuse_csc(const Tensor<T>& x, const Tensor<T>& y, const KernelSet<T>& k,
                   const KernelSet<T>& k_hat, Padding padding = Padding::same);

template <std::floating_point T>
struct CscKernels {
  KernelSet<T> k;
  KernelSet<T> k_hat;
};

// k = first half of k2c, k_hat = second half - first half, so that
// fuse_csc(x, y, k, k_hat) realises fuse_concat(x, y, k2c).
template <std::floating_point T>
CscKernels<T> csc_from_concat(const KernelSet<T>& k2c);

// Inverse map: [k; k + k_hat].
template <std::floating_point T>
KernelSet<T> concat_from_csc(const KernelSet<T>& k, const KernelSet<T>& k_hat);

template <std::floating_point T>
struct FusionGrads {
  Tensor<T> grad_x;
  Tensor<T> grad_y;
  KernelSet<T> grad_k;      // k for add/csc, k2c for concat
  KernelSet<T> grad_k_hat;  // csc only; empty otherwise
};

// Gradients of sum(upstream * fuse_*(x, y, ...)). For add and concat, k_hat
// is ignored.
template <std::floating_point T>
FusionGrads<T> fuse_backward(FusionKind kind, const Tensor<T>& x, const Tensor<T>& y,
                             const KernelSet<T>& k, const KernelSet<T>& k_hat,
                             const Tensor<T>& upstream, Padding padding = Padding::same);

}  // namespace dahaze::fusion
