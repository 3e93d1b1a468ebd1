#include <gtest/gtest.h>

#include <cmath>

#include "dahaze/fusion/demo.hpp"
#include "dahaze/fusion/fusion_ops.hpp"

using namespace dahaze;
using namespace dahaze::fusion;

TEST(Demo, ZeroStepsReturnsInitialLoss) {
  const auto trace = train_fusion_demo(1, FusionKind::add, 0);
  ASSERT_EQ(trace.size(), 1u);
  const DemoTask task = make_demo_task(1);
  EXPECT_EQ(trace[0], demo_loss(init_demo_net(FusionKind::add, 1), task));
}

TEST(Demo, SameSeedSameTrace) {
  for (auto kind : {FusionKind::add, FusionKind::concat, FusionKind::csc}) {
    EXPECT_EQ(train_fusion_demo(9, kind, 30), train_fusion_demo(9, kind, 30));
  }
  EXPECT_NE(train_fusion_demo(9, FusionKind::add, 5), train_fusion_demo(10, FusionKind::add, 5));
}

TEST(Demo, TrainingReducesLoss) {
  for (auto kind : {FusionKind::add, FusionKind::concat, FusionKind::csc}) {
    const auto trace = train_fusion_demo(0xDA11A5E, kind, 200);
    EXPECT_LT(trace.back(), trace.front()) << to_string(kind);
  }
}

TEST(Demo, CscStartsAsAdd) {
  const FusionNet add = init_demo_net(FusionKind::add, 4);
  const FusionNet csc = init_demo_net(FusionKind::csc, 4);
  const auto kk = csc.csc_kernels();
  EXPECT_EQ(kk.k, add.k1);
  for (double v : kk.k_hat.weights()) EXPECT_EQ(v, 0.0);
  const DemoTask task = make_demo_task(4);
  EXPECT_EQ(demo_loss(csc, task), demo_loss(add, task));
}

TEST(Demo, CscFromTrainedConcatHasEqualLoss) {
  const DemoTask task = make_demo_task(21);
  FusionNet concat = init_demo_net(FusionKind::concat, 21);
  train(concat, task, 50, DemoConfig{}.step);
  const FusionNet csc = FusionNet::csc_from_concat_net(concat);
  EXPECT_EQ(demo_loss(csc, task), demo_loss(concat, task));
  const auto kk = csc.csc_kernels();
  const auto direct = csc_from_concat(concat.k1);
  EXPECT_EQ(kk.k, direct.k);
}

TEST(Demo, CscFromScratchNoWorseThanAdd) {
  for (std::uint64_t seed : {0xDA11A5Eull, 1ull, 7ull}) {
    const double add = train_fusion_demo(seed, FusionKind::add, 200).back();
    const double csc = train_fusion_demo(seed, FusionKind::csc, 200).back();
    EXPECT_LE(csc, add + 1e-9) << "seed " << seed;
  }
}

TEST(Demo, GradientChecks) {
  for (auto kind : {FusionKind::add, FusionKind::concat, FusionKind::csc})
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) EXPECT_LE(gradient_check(kind, seed), 1e-4);
}

TEST(Demo, DivergenceReportsStep) {
  const DemoTask task = make_demo_task(5);
  FusionNet net = init_demo_net(FusionKind::add, 5);
  try {
    train(net, task, 10, 1e300);
    FAIL() << "expected divergence";
  } catch (const DivergenceError& e) {
    EXPECT_GE(e.step(), 1);
  }
}
