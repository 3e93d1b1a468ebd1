#include "dahaze/fusion/loss.hpp"

#include <cmath>

#include "dahaze/error.hpp"

namespace dahaze::fusion {

template <std::floating_point T>
LossAndGrad<T> l1_loss(const Tensor<T>& restored, const Tensor<T>& gt) {
  if (!restored.same_shape(gt)) throw InvalidArgument("l1_loss: shape mismatch");
  const auto r = restored.data();
  const auto g = gt.data();
  const T n = static_cast<T>(r.size());
  Tensor<T> grad(restored.channels(), restored.height(), restored.width());
  auto gd = grad.data();
  T sum{0};
  for (std::size_t i = 0; i < r.size(); ++i) {
    const T d = r[i] - g[i];
    sum += std::fabs(d);
    gd[i] = d > T{0} ? T{1} / n : (d < T{0} ? T{-1} / n : T{0});
  }
  return {sum / n, std::move(grad)};
}

template LossAndGrad<float> l1_loss<float>(const Tensor<float>&, const Tensor<float>&);
template LossAndGrad<double> l1_loss<double>(const Tensor<double>&, const Tensor<double>&);

}  // namespace dahaze::fusion
