#pragma once

#include <concepts>

#include "dahaze/fusion/tensor.hpp"

namespace dahaze::fusion {

// same: zero padding of kh/2, kw/2 so spatial size is kept (odd kernels only).
// valid: no padding, output (h - kh + 1) x (w - kw + 1).
enum class Padding { same, valid };

// Dense 2-D cross-correlation (no kernel flip):
//   out[o][y][x] = sum_c sum_i sum_j in[c][y + i - ph][x + j - pw] * k[o][c][i][j]
// Each output element accumulates in (c, i, j) order, so results do not
// depend on how output channels are scheduled.
template <std::floating_point T>
Tensor<T> conv2d(const Tensor<T>& x, const KernelSet<T>& k, Padding padding = Padding::same);

template <std::floating_point T>
struct ConvGrads {
  Tensor<T> grad_x;
  KernelSet<T> grad_k;
};

// Exact gradients of sum(upstream * conv2d(x, k)) with respect to x and k.
template <std::floating_point T>
ConvGrads<T> conv2d_backward(const Tensor<T>& x, const KernelSet<T>& k, const Tensor<T>& upstream,
                             Padding padding = Padding::same);

// Output spatial size for an input dimension, kernel dimension and padding.
int conv_output_extent(int in, int kernel, Padding padding);

}  // namespace dahaze::fusion
