#include "support.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numbers>
#include <stdexcept>

#include <unistd.h>

#include "dahaze/image_io.hpp"

namespace testing_support {

using dahaze::fusion::KernelSet;
using dahaze::fusion::Tensor;

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  path_ = fs::temp_directory_path() /
          ("dahaze_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
  fs::remove_all(path_);
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

namespace {

// 48 distinct (fx, fy) pairs from [1, 7] x [1, 7] minus (7, 7); scene i owns
// pairs 2i and 2i + 1.
std::pair<int, int> frequency_pair(int slot) { return {1 + slot % 7, 1 + slot / 7}; }

}  // namespace

dahaze::DepthMap desk_depth(int index, int size, std::uint64_t seed) {
  if (index < 0 || index >= 24) throw std::out_of_range("desk corpus holds at most 24 scenes");
  dahaze::Rng rng(dahaze::sub_seed(seed, static_cast<std::uint64_t>(index)));
  const double two_pi = 2.0 * std::numbers::pi;
  std::vector<float> v(static_cast<std::size_t>(size) * size);
  const auto [fx0, fy0] = frequency_pair(2 * index);
  const auto [fx1, fy1] = frequency_pair(2 * index + 1);
  const double p0 = rng.uniform(0.0, two_pi);
  const double p1 = rng.uniform(0.0, two_pi);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const double u = static_cast<double>(x) / size;
      const double w = static_cast<double>(y) / size;
      const double s = std::sin(two_pi * (fx0 * u + fy0 * w) + p0) + std::sin(two_pi * (fx1 * u + fy1 * w) + p1);
      v[static_cast<std::size_t>(y) * size + x] = static_cast<float>(5.5 + 2.25 * s);
    }
  }
  return dahaze::DepthMap(size, size, std::move(v));
}

dahaze::Image random_image(int width, int height, dahaze::Rng& rng) {
  std::vector<float> s(static_cast<std::size_t>(width) * height * 3);
  for (auto& v : s) v = static_cast<float>(rng.uniform());
  return dahaze::Image(width, height, std::move(s));
}

dahaze::ImageF64 random_image_f64(int width, int height, dahaze::Rng& rng) {
  std::vector<double> s(static_cast<std::size_t>(width) * height * 3);
  for (auto& v : s) v = rng.uniform();
  return dahaze::ImageF64(width, height, std::move(s));
}

DeskCorpus write_desk_corpus(const fs::path& root, int count, int size, std::uint64_t seed) {
  DeskCorpus c{root / "clear", root / "depth", {}};
  fs::create_directories(c.clear_dir);
  fs::create_directories(c.depth_dir);
  dahaze::Rng rng(seed);
  for (int i = 0; i < count; ++i) {
    char id[16];
    std::snprintf(id, sizeof id, "scene%02d", i);
    c.ids.emplace_back(id);
    dahaze::save_image(random_image(size, size, rng), c.clear_dir / (c.ids.back() + ".png"));
    dahaze::save_raw_depth(desk_depth(i, size, seed), c.depth_dir / (c.ids.back() + ".dahz"));
  }
  return c;
}

double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) throw std::invalid_argument("pearson: size mismatch");
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

PlantedPair plant_psnr(int width, int height, double target_db) {
  const std::size_t n = static_cast<std::size_t>(width) * height * 3;
  const double target_sse = std::pow(10.0, -target_db / 10.0) * 255.0 * 255.0 * static_cast<double>(n);
  // sse = (n - m) k^2 + m (k + 1)^2 in squared codes.
  const int k = static_cast<int>(std::floor(std::sqrt(target_sse / static_cast<double>(n))));
  const double step = static_cast<double>((k + 1) * (k + 1) - k * k);
  const auto m = static_cast<std::size_t>(
      std::clamp(std::llround((target_sse - static_cast<double>(n) * k * k) / step), 0LL, static_cast<long long>(n)));
  std::vector<float> gt(n, 128.0f / 255.0f);
  std::vector<float> restored(n);
  for (std::size_t i = 0; i < n; ++i) restored[i] = static_cast<float>(128 + k + (i < m ? 1 : 0)) / 255.0f;
  return {dahaze::Image(width, height, std::move(gt)), dahaze::Image(width, height, std::move(restored))};
}

Tensor<double> random_tensor(int c, int h, int w, dahaze::Rng& rng, double lo, double hi) {
  std::vector<double> d(static_cast<std::size_t>(c) * h * w);
  for (auto& v : d) v = rng.uniform(lo, hi);
  return Tensor<double>(c, h, w, std::move(d));
}

KernelSet<double> random_kernels(int o, int c, int kh, int kw, dahaze::Rng& rng, double lo, double hi) {
  std::vector<double> d(static_cast<std::size_t>(o) * c * kh * kw);
  for (auto& v : d) v = rng.uniform(lo, hi);
  return KernelSet<double>(o, c, kh, kw, std::move(d));
}

Tensor<double> reference_conv(const Tensor<double>& x, const KernelSet<double>& k, bool same) {
  const int ph = same ? k.kh() / 2 : 0;
  const int pw = same ? k.kw() / 2 : 0;
  const int oh = same ? x.height() : x.height() - k.kh() + 1;
  const int ow = same ? x.width() : x.width() - k.kw() + 1;
  Tensor<double> out(k.out_channels(), oh, ow);
  for (int o = 0; o < k.out_channels(); ++o)
    for (int yy = 0; yy < oh; ++yy)
      for (int xx = 0; xx < ow; ++xx) {
        double acc = 0.0;
        for (int c = 0; c < x.channels(); ++c)
          for (int i = 0; i < k.kh(); ++i)
            for (int j = 0; j < k.kw(); ++j) {
              const int sy = yy + i - ph;
              const int sx = xx + j - pw;
              if (sy < 0 || sy >= x.height() || sx < 0 || sx >= x.width()) continue;
              acc += x(c, sy, sx) * k(o, c, i, j);
            }
        out(o, yy, xx) = acc;
      }
  return out;
}

double mixed_rel_err(double analytic, double numeric) {
  return std::abs(analytic - numeric) / std::max({1.0, std::abs(analytic), std::abs(numeric)});
}

bool files_equal(const fs::path& a, const fs::path& b) {
  std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
  if (!fa || !fb) return false;
  return std::equal(std::istreambuf_iterator<char>(fa), std::istreambuf_iterator<char>(),
                    std::istreambuf_iterator<char>(fb), std::istreambuf_iterator<char>());
}

}  // namespace testing_support
