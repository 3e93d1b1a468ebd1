#include "dahaze/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>
#include <system_error>
#include <vector>

#include "dahaze/error.hpp"
#include "dahaze/image_io.hpp"
#include "dahaze/parallel.hpp"

namespace dahaze {
namespace fs = std::filesystem;

namespace {

void require_same_shape(const Image& a, const Image& b, const char* what) {
  if (!a.same_shape(b)) {
    throw InvalidArgument(std::string(what) + ": dimension mismatch " + std::to_string(a.width()) + "x" +
                          std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                          std::to_string(b.height()));
  }
}

constexpr int kWindow = 11;
constexpr double kSigma = 1.5;
constexpr double kC1 = 0.01 * 0.01;
constexpr double kC2 = 0.03 * 0.03;

std::array<double, kWindow> gaussian_taps() {
  std::array<double, kWindow> g{};
  double sum = 0.0;
  for (int i = 0; i < kWindow; ++i) {
    const double x = i - kWindow / 2;
    g[i] = std::exp(-(x * x) / (2.0 * kSigma * kSigma));
    sum += g[i];
  }
  for (double& v : g) v /= sum;
  return g;
}

struct Plane {
  int w = 0;
  int h = 0;
  std::vector<double> v;
  double operator()(int x, int y) const { return v[static_cast<std::size_t>(y) * w + x]; }
};

Plane luma(const Image& img) {
  Plane p{img.width(), img.height(), std::vector<double>(img.pixel_count())};
  const auto s = img.samples();
  for (std::size_t i = 0; i < p.v.size(); ++i) {
    p.v[i] = 0.299 * s[3 * i] + 0.587 * s[3 * i + 1] + 0.114 * s[3 * i + 2];
  }
  return p;
}

// Separable Gaussian filter keeping only windows that fit entirely.
Plane filter_valid(const Plane& in, const std::array<double, kWindow>& g) {
  const int ow = in.w - kWindow + 1;
  const int oh = in.h - kWindow + 1;
  Plane rows{ow, in.h, std::vector<double>(static_cast<std::size_t>(ow) * in.h)};
  for (int y = 0; y < in.h; ++y) {
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int k = 0; k < kWindow; ++k) acc += g[k] * in(x + k, y);
      rows.v[static_cast<std::size_t>(y) * ow + x] = acc;
    }
  }
  Plane out{ow, oh, std::vector<double>(static_cast<std::size_t>(ow) * oh)};
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int k = 0; k < kWindow; ++k) acc += g[k] * rows(x, y + k);
      out.v[static_cast<std::size_t>(y) * ow + x] = acc;
    }
  }
  return out;
}

Plane product(const Plane& a, const Plane& b) {
  Plane out{a.w, a.h, std::vector<double>(a.v.size())};
  for (std::size_t i = 0; i < a.v.size(); ++i) out.v[i] = a.v[i] * b.v[i];
  return out;
}

}  // namespace

double psnr(const Image& a, const Image& b) {
  require_same_shape(a, b, "psnr");
  const auto sa = a.samples();
  const auto sb = b.samples();
  double sum = 0.0;
  for (std::size_t i = 0; i < sa.size(); ++i) {
    const double d = static_cast<double>(sa[i]) - static_cast<double>(sb[i]);
    sum += d * d;
  }
  const double mse = sum / static_cast<double>(sa.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(1.0 / mse);
}

double ssim(const Image& a, const Image& b) {
  require_same_shape(a, b, "ssim");
  if (std::min(a.width(), a.height()) < kWindow) {
    throw InvalidArgument("ssim: images must be at least 11x11, got " + std::to_string(a.width()) + "x" +
                          std::to_string(a.height()));
  }
  static const auto g = gaussian_taps();
  const Plane x = luma(a);
  const Plane y = luma(b);
  const Plane mu_x = filter_valid(x, g);
  const Plane mu_y = filter_valid(y, g);
  const Plane xx = filter_valid(product(x, x), g);
  const Plane yy = filter_valid(product(y, y), g);
  const Plane xy = filter_valid(product(x, y), g);

  double total = 0.0;
  for (std::size_t i = 0; i < mu_x.v.size(); ++i) {
    const double mx = mu_x.v[i];
    const double my = mu_y.v[i];
    const double var_x = xx.v[i] - mx * mx;
    const double var_y = yy.v[i] - my * my;
    const double cov = xy.v[i] - mx * my;
    const double num = (2.0 * mx * my + kC1) * (2.0 * cov + kC2);
    const double den = (mx * mx + my * my + kC1) * (var_x + var_y + kC2);
    total += num / den;
  }
  return std::clamp(total / static_cast<double>(mu_x.v.size()), -1.0, 1.0);
}

SetResult evaluate_set(const fs::path& restored_dir, const fs::path& gt_dir, const std::string& set_name,
                       int workers) {
  auto list_pngs = [](const fs::path& dir) {
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) throw FileNotFound("not a directory: " + dir.string());
    std::vector<std::string> names;
    for (const auto& e : fs::directory_iterator(dir)) {
      if (e.is_regular_file() && e.path().extension() == ".png") names.push_back(e.path().filename().string());
    }
    std::sort(names.begin(), names.end());
    return names;
  };
  const auto restored = list_pngs(restored_dir);
  const auto gt = list_pngs(gt_dir);
  std::vector<std::string> common;
  std::set_intersection(restored.begin(), restored.end(), gt.begin(), gt.end(), std::back_inserter(common));
  if (common.empty()) {
    throw InvalidArgument("evaluate_set: no matching file names between " + restored_dir.string() + " and " +
                          gt_dir.string());
  }

  std::vector<double> psnrs(common.size());
  std::vector<double> ssims(common.size());
  parallel_for(common.size(), workers, [&](std::size_t i) {
    const Image r = load_image(restored_dir / common[i]);
    const Image g = load_image(gt_dir / common[i]);
    psnrs[i] = psnr(r, g);
    ssims[i] = ssim(r, g);
  });

  // Reduce in file-name order so the result does not depend on workers.
  SetResult out;
  out.set_name = set_name;
  out.count = common.size();
  double psnr_sum = 0.0;
  std::size_t finite = 0;
  for (double p : psnrs) {
    if (std::isinf(p)) {
      ++out.infinite_psnr_count;
    } else {
      psnr_sum += p;
      ++finite;
    }
  }
  out.mean_psnr = finite == 0 ? std::numeric_limits<double>::infinity() : psnr_sum / static_cast<double>(finite);
  out.mean_ssim = std::accumulate(ssims.begin(), ssims.end(), 0.0) / static_cast<double>(ssims.size());
  return out;
}

double discrepancy(std::span<const double> set_means) {
  if (set_means.size() < 2) throw InvalidArgument("discrepancy needs at least two test sets");
  const auto n = static_cast<double>(set_means.size());
  const double mean = std::accumulate(set_means.begin(), set_means.end(), 0.0) / n;
  double ss = 0.0;
  for (double r : set_means) ss += (r - mean) * (r - mean);
  return ss / n;
}

std::string format_set_line(const SetResult& r) {
  char psnr_buf[64];
  if (std::isinf(r.mean_psnr)) {
    std::snprintf(psnr_buf, sizeof psnr_buf, "inf");
  } else {
    std::snprintf(psnr_buf, sizeof psnr_buf, "%.4f", r.mean_psnr);
  }
  char ssim_buf[64];
  std::snprintf(ssim_buf, sizeof ssim_buf, "%.6f", r.mean_ssim);
  return r.set_name + "\tpsnr=" + psnr_buf + "\tssim=" + ssim_buf + "\tcount=" + std::to_string(r.count);
}

std::string format_discrepancy_line(double value) {
  char line[64];
  std::snprintf(line, sizeof line, "discrepancy=%.4f", value);
  return line;
}

}  // namespace dahaze
