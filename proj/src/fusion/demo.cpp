#include "dahaze/fusion/demo.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dahaze/fusion/conv.hpp"
#include "dahaze/fusion/loss.hpp"

namespace dahaze::fusion {
namespace {

// Independent streams carved out of the single run seed.
constexpr std::uint64_t kTaskStream = 0x7461736BULL;    // "task"
constexpr std::uint64_t kInitStream = 0x696E6974ULL;    // "init"
constexpr std::uint64_t kCheckStream = 0x636B636BULL;   // "ckck"

KernelSet<double> uniform_kernels(Rng& rng, int out, int in, int kh, int kw) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(in) * kh * kw);
  std::vector<double> w(static_cast<std::size_t>(out) * in * kh * kw);
  for (double& v : w) v = rng.uniform(-bound, bound);
  return KernelSet<double>(out, in, kh, kw, std::move(w));
}

Tensor<double> uniform_tensor(Rng& rng, int c, int h, int w, double lo, double hi) {
  std::vector<double> v(static_cast<std::size_t>(c) * h * w);
  for (double& x : v) x = rng.uniform(lo, hi);
  return Tensor<double>(c, h, w, std::move(v));
}

void axpy(KernelSet<double>& dst, double a, const KernelSet<double>& src) {
  auto d = dst.weights();
  const auto s = src.weights();
  for (std::size_t i = 0; i < d.size(); ++i) d[i] += a * s[i];
}

Tensor<double> fusion_stage(const FusionNet& net, const Tensor<double>& x, const Tensor<double>& y) {
  switch (net.kind) {
    case FusionKind::add: return fuse_add(x, y, net.k1);
    case FusionKind::concat: return fuse_concat(x, y, net.k1);
    case FusionKind::csc: return conv2d(x, net.k1) + conv2d(y, net.k1_y);
  }
  throw InvalidArgument("unknown fusion kind");
}

struct LossGrad {
  double loss;
  NetGrads grads;
};

NetGrads zero_grads(const FusionNet& net) {
  NetGrads g;
  g.k1 = KernelSet<double>(net.k1.out_channels(), net.k1.in_channels(), net.k1.kh(), net.k1.kw());
  if (net.kind == FusionKind::csc) {
    g.k1_y = KernelSet<double>(net.k1_y.out_channels(), net.k1_y.in_channels(), net.k1_y.kh(), net.k1_y.kw());
  }
  g.k2 = KernelSet<double>(net.k2.out_channels(), net.k2.in_channels(), net.k2.kh(), net.k2.kw());
  return g;
}

LossGrad loss_and_grads(const FusionNet& net, const DemoTask& task) {
  const double inv = 1.0 / static_cast<double>(task.xs.size());
  LossGrad out{0.0, zero_grads(net)};
  for (std::size_t s = 0; s < task.xs.size(); ++s) {
    auto lg = l1_loss(net.forward(task.xs[s], task.ys[s]), task.targets[s]);
    out.loss += lg.loss * inv;
    for (double& g : lg.grad.data()) g *= inv;
    const NetGrads g = backward(net, task.xs[s], task.ys[s], lg.grad);
    out.grads.k1 += g.k1;
    if (net.kind == FusionKind::csc) out.grads.k1_y += g.k1_y;
    out.grads.k2 += g.k2;
  }
  return out;
}

}  // namespace

Tensor<double> FusionNet::forward(const Tensor<double>& x, const Tensor<double>& y) const {
  return conv2d(fusion_stage(*this, x, y), k2);
}

CscKernels<double> FusionNet::csc_kernels() const {
  if (kind != FusionKind::csc) throw InvalidArgument("csc_kernels: network is not a csc network");
  return {k1, k1_y - k1};
}

FusionNet FusionNet::csc_from_concat_net(const FusionNet& concat) {
  if (concat.kind != FusionKind::concat) throw InvalidArgument("csc_from_concat_net: source is not concat");
  const int c = concat.k1.in_channels() / 2;
  FusionNet net;
  net.kind = FusionKind::csc;
  net.k1 = csc_from_concat(concat.k1).k;
  // The y branch of csc applies k + k_hat, which is the concat y half.
  net.k1_y = slice_in_channels(concat.k1, c, c);
  net.k2 = concat.k2;
  return net;
}

NetGrads backward(const FusionNet& net, const Tensor<double>& x, const Tensor<double>& y,
                  const Tensor<double>& upstream) {
  const Tensor<double> h = fusion_stage(net, x, y);
  auto top = conv2d_backward(h, net.k2, upstream);
  NetGrads g;
  g.k2 = std::move(top.grad_k);
  switch (net.kind) {
    case FusionKind::add:
    case FusionKind::concat:
      g.k1 = fuse_backward(net.kind, x, y, net.k1, KernelSet<double>{}, top.grad_x).grad_k;
      break;
    case FusionKind::csc:
      g.k1 = conv2d_backward(x, net.k1, top.grad_x).grad_k;
      g.k1_y = conv2d_backward(y, net.k1_y, top.grad_x).grad_k;
      break;
  }
  return g;
}

void gradient_step(FusionNet& net, const NetGrads& g, double step) {
  if (net.kind == FusionKind::csc) {
    // d/dk = g_x + g_y and d/dk_hat = g_y, so k + k_hat moves by g_x + 2 g_y.
    KernelSet<double> dk = g.k1 + g.k1_y;
    KernelSet<double> dk_y = dk + g.k1_y;
    axpy(net.k1, -step, dk);
    axpy(net.k1_y, -step, dk_y);
  } else {
    axpy(net.k1, -step, g.k1);
  }
  axpy(net.k2, -step, g.k2);
}

DivergenceError::DivergenceError(int step, double loss)
    : Error("training diverged at step " + std::to_string(step) + " (loss " + std::to_string(loss) + ")"),
      step_(step) {}

DemoTask make_demo_task(std::uint64_t seed, const DemoConfig& cfg) {
  Rng rng(sub_seed(seed, kTaskStream));
  FusionNet teacher;
  teacher.kind = FusionKind::concat;
  teacher.k1 = uniform_kernels(rng, cfg.hidden, 2 * cfg.channels, cfg.kernel, cfg.kernel);
  teacher.k2 = uniform_kernels(rng, cfg.out_channels, cfg.hidden, cfg.kernel, cfg.kernel);
  DemoTask task;
  for (int s = 0; s < cfg.samples; ++s) {
    task.xs.push_back(uniform_tensor(rng, cfg.channels, cfg.size, cfg.size, -1.0, 1.0));
    task.ys.push_back(uniform_tensor(rng, cfg.channels, cfg.size, cfg.size, -1.0, 1.0));
    task.targets.push_back(teacher.forward(task.xs.back(), task.ys.back()));
  }
  return task;
}

FusionNet init_demo_net(FusionKind kind, std::uint64_t seed, const DemoConfig& cfg) {
  Rng rng(sub_seed(seed, kInitStream));
  FusionNet net;
  net.kind = kind;
  const int fused_in = kind == FusionKind::concat ? 2 * cfg.channels : cfg.channels;
  net.k1 = uniform_kernels(rng, cfg.hidden, fused_in, cfg.kernel, cfg.kernel);
  net.k2 = uniform_kernels(rng, cfg.out_channels, cfg.hidden, cfg.kernel, cfg.kernel);
  if (kind == FusionKind::csc) net.k1_y = net.k1;  // k_hat starts at zero
  return net;
}

double demo_loss(const FusionNet& net, const DemoTask& task) {
  double total = 0.0;
  for (std::size_t s = 0; s < task.xs.size(); ++s) {
    total += l1_loss(net.forward(task.xs[s], task.ys[s]), task.targets[s]).loss;
  }
  return total / static_cast<double>(task.xs.size());
}

std::vector<double> train(FusionNet& net, const DemoTask& task, int steps, double step_size) {
  if (steps < 0) throw InvalidArgument("train: steps must be >= 0");
  std::vector<double> trace;
  trace.reserve(static_cast<std::size_t>(steps) + 1);
  for (int s = 0; s <= steps; ++s) {
    LossGrad lg = loss_and_grads(net, task);
    if (!std::isfinite(lg.loss)) throw DivergenceError(s, lg.loss);
    trace.push_back(lg.loss);
    if (s < steps) gradient_step(net, lg.grads, step_size);
  }
  return trace;
}

std::vector<double> train_fusion_demo(std::uint64_t seed, FusionKind kind, int steps, const DemoConfig& cfg) {
  const DemoTask task = make_demo_task(seed, cfg);
  FusionNet net = init_demo_net(kind, seed, cfg);
  return train(net, task, steps, cfg.step);
}

double gradient_check(FusionKind kind, std::uint64_t seed, const DemoConfig& cfg) {
  Rng rng(sub_seed(seed, kCheckStream));
  FusionNet net = init_demo_net(kind, seed, cfg);
  if (kind == FusionKind::csc) {
    // Move away from k_hat = 0 so both branches carry distinct weights.
    for (double& w : net.k1_y.weights()) w += rng.uniform(-0.2, 0.2);
  }
  const auto x = uniform_tensor(rng, cfg.channels, cfg.size, cfg.size, -1.0, 1.0);
  const auto y = uniform_tensor(rng, cfg.channels, cfg.size, cfg.size, -1.0, 1.0);
  const auto up = uniform_tensor(rng, cfg.out_channels, cfg.size, cfg.size, -1.0, 1.0);

  auto objective = [&](const FusionNet& n) {
    const auto out = n.forward(x, y);
    double s = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) s += out.data()[i] * up.data()[i];
    return s;
  };
  const NetGrads analytic = backward(net, x, y, up);

  constexpr double h = 1e-5;
  double worst = 0.0;
  auto check = [&](KernelSet<double> FusionNet::*member, const KernelSet<double>& grad) {
    auto weights = (net.*member).weights();
    for (std::size_t i = 0; i < weights.size(); ++i) {
      const double saved = weights[i];
      weights[i] = saved + h;
      const double plus = objective(net);
      weights[i] = saved - h;
      const double minus = objective(net);
      weights[i] = saved;
      const double numeric = (plus - minus) / (2.0 * h);
      const double a = grad.weights()[i];
      const double err = std::fabs(a - numeric) / std::max({1.0, std::fabs(a), std::fabs(numeric)});
      worst = std::max(worst, err);
    }
  };
  check(&FusionNet::k1, analytic.k1);
  if (kind == FusionKind::csc) check(&FusionNet::k1_y, analytic.k1_y);
  check(&FusionNet::k2, analytic.k2);
  return worst;
}

}  // namespace dahaze::fusion
