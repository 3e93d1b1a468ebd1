#include "dahaze/fusion/cost.hpp"

#include "dahaze/error.hpp"

namespace dahaze::fusion {

Cost count_cost(const CostConfig& cfg) {
  if (cfg.channels < 1 || cfg.block_depth < 1 || cfg.kh < 1 || cfg.kw < 1 || cfg.height < 1 || cfg.width < 1 ||
      cfg.expansion < 1) {
    throw InvalidArgument("count_cost: every dimension must be >= 1");
  }
  using u64 = std::uint64_t;
  const u64 c = static_cast<u64>(cfg.channels);
  const u64 taps = static_cast<u64>(cfg.kh) * static_cast<u64>(cfg.kw);
  const u64 pixels = static_cast<u64>(cfg.height) * static_cast<u64>(cfg.width);
  const u64 wide = static_cast<u64>(cfg.expansion) * c;

  auto conv = [&](u64 in, u64 out) { return Cost{in * out * taps, 2 * in * out * taps * pixels}; };

  Cost total;
  auto add_cost = [&](Cost part) {
    total.params += part.params;
    total.flops += part.flops;
  };

  u64 block_in = c;
  switch (cfg.fusion) {
    case FusionKind::add:
      add_cost({0, c * pixels});
      break;
    case FusionKind::csc:
      // Khat on y, then x + y + Khat*y.
      add_cost(conv(c, c));
      add_cost({0, 2 * c * pixels});
      break;
    case FusionKind::concat:
      block_in = 2 * c;
      break;
  }
  add_cost(conv(block_in, wide));
  for (int layer = 1; layer < cfg.block_depth; ++layer) add_cost(conv(wide, wide));
  return total;
}

}  // namespace dahaze::fusion
