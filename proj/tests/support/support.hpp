#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "dahaze/fusion/tensor.hpp"
#include "dahaze/image.hpp"
#include "dahaze/rng.hpp"
#include "dahaze/synthesize.hpp"

namespace testing_support {

namespace fs = std::filesystem;

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const fs::path& path() const noexcept { return path_; }
  fs::path operator/(const std::string& child) const { return path_ / child; }

 private:
  fs::path path_;
};

struct DeskCorpus {
  fs::path clear_dir;
  fs::path depth_dir;
  std::vector<std::string> ids;
};

// `count` scenes of size x size: clear/<id>.png and depth/<id>.dahz. Each
// depth map is 1 + a sum of two full-period sinusoids whose frequency pairs
// are unique to the scene, so different scenes' depths are orthogonal on the
// pixel grid. count <= 24.
DeskCorpus write_desk_corpus(const fs::path& root, int count, int size, std::uint64_t seed);

dahaze::DepthMap desk_depth(int index, int size, std::uint64_t seed);
dahaze::Image random_image(int width, int height, dahaze::Rng& rng);
dahaze::ImageF64 random_image_f64(int width, int height, dahaze::Rng& rng);

// Owning copy, for iterating the view of a temporary.
template <typename T>
std::vector<std::remove_const_t<T>> owned(std::span<T> s) {
  return {s.begin(), s.end()};
}

double pearson(std::span<const double> a, std::span<const double> b);

// gt is mid-grey (code 128); restored offsets every sample by k or k + 1
// codes, with the count of k + 1 chosen so that PSNR(restored, gt) is as close
// to target_db as the sample count allows.
struct PlantedPair {
  dahaze::Image gt;
  dahaze::Image restored;
};
PlantedPair plant_psnr(int width, int height, double target_db);

dahaze::fusion::Tensor<double> random_tensor(int c, int h, int w, dahaze::Rng& rng, double lo = -1.0,
                                             double hi = 1.0);
dahaze::fusion::KernelSet<double> random_kernels(int o, int c, int kh, int kw, dahaze::Rng& rng,
                                                 double lo = -1.0, double hi = 1.0);

// Quadruple loop over the definition of zero-padded cross-correlation.
dahaze::fusion::Tensor<double> reference_conv(const dahaze::fusion::Tensor<double>& x,
                                              const dahaze::fusion::KernelSet<double>& k, bool same);

// |a - n| / max(1, |a|, |n|)
double mixed_rel_err(double analytic, double numeric);

inline dahaze::SynthesisOptions with_workers(int n) {
  dahaze::SynthesisOptions o;
  o.workers = n;
  return o;
}

bool files_equal(const fs::path& a, const fs::path& b);

}  // namespace testing_support
