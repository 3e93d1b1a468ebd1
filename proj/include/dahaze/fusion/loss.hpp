#pragma once

#include <concepts>

#include "dahaze/fusion/tensor.hpp"

namespace dahaze::fusion {

template <std::floating_point T>
struct LossAndGrad {
  T loss;
  // d loss / d restored: sign(restored - gt) / N with sign(0) = 0.
  Tensor<T> grad;
};

// Mean absolute error (1/N) * sum |gt - restored| over all N elements.
template <std::floating_point T>
LossAndGrad<T> l1_loss(const Tensor<T>& restored, const Tensor<T>& gt);

}  // namespace dahaze::fusion
