#include "dahaze/fusion/conv.hpp"

#include <string>

#include "dahaze/error.hpp"

namespace dahaze::fusion {
namespace {

struct Geometry {
  int pad_y = 0;
  int pad_x = 0;
  int out_h = 0;
  int out_w = 0;
};

template <typename T>
Geometry geometry(const Tensor<T>& x, const KernelSet<T>& k, Padding padding) {
  if (x.channels() != k.in_channels()) {
    throw InvalidArgument("conv2d: input has " + std::to_string(x.channels()) + " channels, kernels expect " +
                          std::to_string(k.in_channels()));
  }
  Geometry g;
  g.out_h = conv_output_extent(x.height(), k.kh(), padding);
  g.out_w = conv_output_extent(x.width(), k.kw(), padding);
  if (padding == Padding::same) {
    g.pad_y = k.kh() / 2;
    g.pad_x = k.kw() / 2;
  }
  return g;
}

}  // namespace

int conv_output_extent(int in, int kernel, Padding padding) {
  if (padding == Padding::same) {
    if (kernel % 2 == 0) throw InvalidArgument("conv2d: same padding needs odd kernel dimensions");
    return in;
  }
  const int out = in - kernel + 1;
  if (out < 1) throw InvalidArgument("conv2d: kernel larger than input for valid padding");
  return out;
}

template <std::floating_point T>
Tensor<T> conv2d(const Tensor<T>& x, const KernelSet<T>& k, Padding padding) {
  const Geometry g = geometry(x, k, padding);
  Tensor<T> out(k.out_channels(), g.out_h, g.out_w);
  for (int o = 0; o < k.out_channels(); ++o) {
    for (int y = 0; y < g.out_h; ++y) {
      for (int xo = 0; xo < g.out_w; ++xo) {
        T acc{0};
        for (int c = 0; c < k.in_channels(); ++c) {
          for (int i = 0; i < k.kh(); ++i) {
            const int sy = y + i - g.pad_y;
            if (sy < 0 || sy >= x.height()) continue;
            for (int j = 0; j < k.kw(); ++j) {
              const int sx = xo + j - g.pad_x;
              if (sx < 0 || sx >= x.width()) continue;
              acc += x(c, sy, sx) * k(o, c, i, j);
            }
          }
        }
        out(o, y, xo) = acc;
      }
    }
  }
  return out;
}

template <std::floating_point T>
ConvGrads<T> conv2d_backward(const Tensor<T>& x, const KernelSet<T>& k, const Tensor<T>& upstream,
                             Padding padding) {
  const Geometry g = geometry(x, k, padding);
  if (upstream.channels() != k.out_channels() || upstream.height() != g.out_h || upstream.width() != g.out_w) {
    throw InvalidArgument("conv2d_backward: upstream gradient shape does not match the conv output");
  }
  ConvGrads<T> grads{Tensor<T>(x.channels(), x.height(), x.width()),
                     KernelSet<T>(k.out_channels(), k.in_channels(), k.kh(), k.kw())};
  for (int o = 0; o < k.out_channels(); ++o) {
    for (int y = 0; y < g.out_h; ++y) {
      for (int xo = 0; xo < g.out_w; ++xo) {
        const T up = upstream(o, y, xo);
        if (up == T{0}) continue;
        for (int c = 0; c < k.in_channels(); ++c) {
          for (int i = 0; i < k.kh(); ++i) {
            const int sy = y + i - g.pad_y;
            if (sy < 0 || sy >= x.height()) continue;
            for (int j = 0; j < k.kw(); ++j) {
              const int sx = xo + j - g.pad_x;
              if (sx < 0 || sx >= x.width()) continue;
              grads.grad_x(c, sy, sx) += up * k(o, c, i, j);
              grads.grad_k(o, c, i, j) += up * x(c, sy, sx);
            }
          }
        }
      }
    }
  }
  return grads;
}

template Tensor<float> conv2d<float>(const Tensor<float>&, const KernelSet<float>&, Padding);
template Tensor<double> conv2d<double>(const Tensor<double>&, const KernelSet<double>&, Padding);
template ConvGrads<float> conv2d_backward<float>(const Tensor<float>&, const KernelSet<float>&,
                                                 const Tensor<float>&, Padding);
template ConvGrads<double> conv2d_backward<double>(const Tensor<double>&, const KernelSet<double>&,
                                                   const Tensor<double>&, Padding);

}  // namespace dahaze::fusion
