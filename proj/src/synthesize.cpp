#include "dahaze/synthesize.hpp"

#include <chrono>
#include <exception>
#include <system_error>

#include "dahaze/error.hpp"
#include "dahaze/haze.hpp"
#include "dahaze/image_io.hpp"
#include "dahaze/parallel.hpp"

namespace dahaze {
namespace fs = std::filesystem;

Image synthesize_pair(const Image& clear, const DepthMap& depth, const HazeParams& params) {
  params.validate();
  const DepthMap& sized = (depth.width() == clear.width() && depth.height() == clear.height())
                              ? depth
                              : resize_bilinear(depth, clear.width(), clear.height());
  const auto t = transmission<float>(sized, params.beta);
  return compose_haze(clear, t, params.A);
}

Image synthesize_record(const PairRecord& record, const SynthesisOptions& options) {
  const Image clear = load_image(record.clear_path);
  DepthMap depth = load_depth(record.depth_path, {options.depth_png_scale});
  if (options.normalize_d_max) depth = normalize_depth(depth, *options.normalize_d_max);
  return synthesize_pair(clear, depth, record.params());
}

SynthesisReport synthesize_dataset(const DatasetManifest& manifest, const fs::path& out_dir,
                                   const SynthesisOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (!fs::is_directory(out_dir)) throw UnwritablePath("cannot create output directory " + out_dir.string());

  // One slot per record; workers never share a slot, and the report is read
  // back in manifest order.
  std::vector<std::string> errors(manifest.records.size());
  std::vector<char> ok(manifest.records.size(), 0);
  parallel_for(manifest.records.size(), options.workers, [&](std::size_t i) {
    const PairRecord& r = manifest.records[i];
    try {
      const Image hazy = synthesize_record(r, options);
      save_image(hazy, out_dir / (r.pair_id + ".png"));
      ok[i] = 1;
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });

  SynthesisReport report;
  for (std::size_t i = 0; i < ok.size(); ++i) {
    if (ok[i]) {
      ++report.succeeded;
    } else {
      report.failures.push_back({manifest.records[i].pair_id, errors[i]});
    }
  }
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace dahaze
