#pragma once

#include <concepts>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "dahaze/error.hpp"
#include "dahaze/fusion/fusion_ops.hpp"
#include "dahaze/rng.hpp"

namespace dahaze::fusion {

/// Two-layer linear fusion network: a fusion stage mapping (x, y) to `hidden`
/// channels, then one `hidden` -> `out` convolution. All convolutions use
/// "same" padding.
///
/// For csc the fusion stage is stored as its two branch kernels, k1 on x and
/// k1_y = k + k_hat on y; k_hat() recovers the extra kernel. The forward pass
/// therefore evaluates conv(x, k) + conv(y, k + k_hat), which is the same sum
/// as the three-term form regrouped.
struct FusionNet {
  FusionKind kind = FusionKind::add;
  KernelSet<double> k1;    // hidden x c (add, csc) or hidden x 2c (concat)
  KernelSet<double> k1_y;  // csc only: hidden x c
  KernelSet<double> k2;    // out x hidden

  Tensor<double> forward(const Tensor<double>& x, const Tensor<double>& y) const;

  // CSC view of the fusion stage: (k, k_hat).
  CscKernels<double> csc_kernels() const;

  // CSC network computing exactly the same function as a concat network.
  static FusionNet csc_from_concat_net(const FusionNet& concat);
};

struct NetGrads {
  KernelSet<double> k1;
  KernelSet<double> k1_y;
  KernelSet<double> k2;
};

// Gradients of sum(upstream * net.forward(x, y)) in the stored coordinates.
NetGrads backward(const FusionNet& net, const Tensor<double>& x, const Tensor<double>& y,
                  const Tensor<double>& upstream);

// Plain gradient-descent step on the network's trainable parameters. For csc
// the trainable pair is (k, k_hat), so k moves by the sum of both branch
// gradients and k_hat by the y-branch gradient.
void gradient_step(FusionNet& net, const NetGrads& grads, double step);

struct DemoConfig {
  int channels = 2;
  int hidden = 4;
  int out_channels = 1;
  int size = 8;
  int kernel = 3;
  int samples = 6;
  double step = 1e-2;
};

/// Fixed synthetic task: inputs uniform in [-1, 1] and targets produced by a
/// concat-fusion teacher whose x and y kernels differ, all drawn from `seed`.
struct DemoTask {
  std::vector<Tensor<double>> xs;
  std::vector<Tensor<double>> ys;
  std::vector<Tensor<double>> targets;
};

DemoTask make_demo_task(std::uint64_t seed, const DemoConfig& config = {});

// Student initialisation: weights uniform in +-1/sqrt(in * kh * kw). add and
// csc draw identical k1/k2 and csc starts with k_hat = 0.
FusionNet init_demo_net(FusionKind kind, std::uint64_t seed, const DemoConfig& config = {});

// Mean over samples of the L1 loss.
double demo_loss(const FusionNet& net, const DemoTask& task);

class DivergenceError : public Error {
 public:
  DivergenceError(int step, double loss);
  int step() const noexcept { return step_; }

 private:
  int step_;
};

// Loss before training followed by the loss after each of `steps` full-batch
// gradient steps (steps + 1 entries). Throws DivergenceError on a non-finite
// loss.
std::vector<double> train(FusionNet& net, const DemoTask& task, int steps, double step_size);

// Seeded end to end: task, initialisation and training.
std::vector<double> train_fusion_demo(std::uint64_t seed, FusionKind kind, int steps,
                                      const DemoConfig& config = {});

// Largest mixed relative error |a - n| / max(1, |a|, |n|) between backward()
// and central differences (step 1e-5) of sum(upstream * forward), over all
// parameters of a freshly initialised network with random inputs.
double gradient_check(FusionKind kind, std::uint64_t seed, const DemoConfig& config = {});

}  // namespace dahaze::fusion
