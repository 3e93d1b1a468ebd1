#pragma once

#include <cstdint>

#include "dahaze/fusion/fusion_ops.hpp"

namespace dahaze::fusion {

/// Cost model for one decoder fusion stage followed by a block of
/// `block_depth` bias-free convolutions. The block's first layer maps the
/// fused input (c channels, or 2c after concatenation) to expansion * c
/// channels; the remaining layers map expansion * c to expansion * c.
///
///   add    : fusion = elementwise add, block input c
///   csc    : add plus one c -> c kh x kw convolution on the y branch
///   concat : no fusion arithmetic, block input 2c
///
/// A convolution with `in` inputs and `out` outputs costs in*out*kh*kw
/// parameters and 2*in*out*kh*kw*h*w FLOPs (multiply + add); an elementwise
/// add over c x h x w costs c*h*w FLOPs.
struct CostConfig {
  FusionKind fusion = FusionKind::add;
  int channels = 32;
  int block_depth = 2;
  int kh = 3;
  int kw = 3;
  int height = 64;
  int width = 64;
  int expansion = 2;
};

struct Cost {
  std::uint64_t params = 0;
  std::uint64_t flops = 0;
  friend bool operator==(const Cost&, const Cost&) = default;
};

// Throws InvalidArgument if any dimension is < 1.
Cost count_cost(const CostConfig& config);

}  // namespace dahaze::fusion
