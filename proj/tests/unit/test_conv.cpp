#include <gtest/gtest.h>

#include <cmath>

#include "dahaze/error.hpp"
#include "dahaze/fusion/conv.hpp"
#include "support.hpp"

using namespace dahaze;
using namespace dahaze::fusion;
using testing_support::random_kernels;
using testing_support::random_tensor;

namespace {

double objective(const Tensor<double>& x, const KernelSet<double>& k, const Tensor<double>& up, Padding p) {
  const Tensor<double> y = conv2d(x, k, p);
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) s += y.data()[i] * up.data()[i];
  return s;
}

}  // namespace

TEST(Conv, OneByOneIdentity) {
  Rng rng(1);
  const auto x = random_tensor(3, 5, 4, rng);
  KernelSet<double> k(3, 3, 1, 1);
  for (int c = 0; c < 3; ++c) k(c, c, 0, 0) = 1.0;
  EXPECT_EQ(conv2d(x, k), x);
}

TEST(Conv, ValidOnesSumToNine) {
  const Tensor<double> x(1, 3, 3, 1.0);
  const KernelSet<double> k(1, 1, 3, 3, 1.0);
  const auto y = conv2d(x, k, Padding::valid);
  ASSERT_EQ(y.height(), 1);
  ASSERT_EQ(y.width(), 1);
  EXPECT_EQ(y(0, 0, 0), 9.0);
}

TEST(Conv, MatchesBruteForce) {
  Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const int c = 1 + trial % 4, o = 1 + trial % 3;
    const int kh = 1 + 2 * (trial % 2), kw = 1 + 2 * ((trial / 2) % 2);
    const auto x = random_tensor(c, 4 + trial % 5, 3 + trial % 6, rng);
    const auto k = random_kernels(o, c, kh, kw, rng);
    for (bool same : {true, false}) {
      const auto got = conv2d(x, k, same ? Padding::same : Padding::valid);
      const auto ref = testing_support::reference_conv(x, k, same);
      ASSERT_TRUE(got.same_shape(ref));
      for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got.data()[i], ref.data()[i], 1e-12);
    }
  }
}

TEST(Conv, Errors) {
  Rng rng(3);
  const auto x = random_tensor(2, 4, 4, rng);
  EXPECT_THROW(conv2d(x, random_kernels(1, 3, 3, 3, rng)), InvalidArgument);
  EXPECT_THROW(conv2d(x, random_kernels(1, 2, 2, 3, rng)), InvalidArgument);
  EXPECT_THROW(conv2d(x, random_kernels(1, 2, 5, 5, rng), Padding::valid), InvalidArgument);
}

TEST(ConvBackward, ZeroUpstream) {
  Rng rng(4);
  const auto x = random_tensor(2, 5, 5, rng);
  const auto k = random_kernels(3, 2, 3, 3, rng);
  const auto g = conv2d_backward(x, k, Tensor<double>(3, 5, 5));
  for (double v : g.grad_x.data()) EXPECT_EQ(v, 0.0);
  for (double v : g.grad_k.weights()) EXPECT_EQ(v, 0.0);
}

TEST(ConvBackward, IdentityKernelPassesUpstream) {
  Rng rng(5);
  const auto x = random_tensor(2, 4, 6, rng);
  KernelSet<double> k(2, 2, 1, 1);
  k(0, 0, 0, 0) = k(1, 1, 0, 0) = 1.0;
  const auto up = random_tensor(2, 4, 6, rng);
  EXPECT_EQ(conv2d_backward(x, k, up).grad_x, up);
}

TEST(ConvBackward, ShapeMismatch) {
  Rng rng(6);
  const auto x = random_tensor(2, 4, 4, rng);
  const auto k = random_kernels(3, 2, 3, 3, rng);
  EXPECT_THROW(conv2d_backward(x, k, Tensor<double>(2, 4, 4)), InvalidArgument);
}

TEST(ConvBackward, MatchesCentralDifferences) {
  Rng rng(7);
  const double h = 1e-5;
  for (int trial = 0; trial < 40; ++trial) {
    const int c = 1 + trial % 4, o = 1 + (trial / 4) % 3;
    const Padding p = trial % 2 ? Padding::valid : Padding::same;
    auto x = random_tensor(c, 3 + trial % 6, 3 + (trial / 3) % 6, rng);
    auto k = random_kernels(o, c, 3, 1 + 2 * (trial % 2), rng);
    const auto up = random_tensor(o, conv_output_extent(x.height(), k.kh(), p),
                                  conv_output_extent(x.width(), k.kw(), p), rng);
    const auto g = conv2d_backward(x, k, up, p);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double v = x.data()[i];
      x.data()[i] = v + h;
      const double fp = objective(x, k, up, p);
      x.data()[i] = v - h;
      const double fm = objective(x, k, up, p);
      x.data()[i] = v;
      EXPECT_LE(testing_support::mixed_rel_err(g.grad_x.data()[i], (fp - fm) / (2 * h)), 1e-4);
    }
    for (std::size_t i = 0; i < k.size(); ++i) {
      const double v = k.weights()[i];
      k.weights()[i] = v + h;
      const double fp = objective(x, k, up, p);
      k.weights()[i] = v - h;
      const double fm = objective(x, k, up, p);
      k.weights()[i] = v;
      EXPECT_LE(testing_support::mixed_rel_err(g.grad_k.weights()[i], (fp - fm) / (2 * h)), 1e-4);
    }
  }
}
