#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dahaze/image.hpp"
#include "dahaze/manifest.hpp"

namespace dahaze {

struct SynthesisOptions {
  int workers = 1;
  // Scale for 16-bit PNG depth maps; raw depth files ignore it.
  double depth_png_scale = 0.0;
  // When set, each depth map is rescaled so its maximum equals this value
  // before the transmission is computed.
  std::optional<float> normalize_d_max;
};

struct RecordFailure {
  std::string pair_id;
  std::string message;
};

struct SynthesisReport {
  std::size_t succeeded = 0;
  std::vector<RecordFailure> failures;
  double wall_seconds = 0.0;
};

// Hazy image for one clear image and a depth map of any size. The depth is
// resized to the image when the dimensions differ.
Image synthesize_pair(const Image& clear, const DepthMap& depth, const HazeParams& params);

// Loads, synthesises and returns one record's hazy image without writing it.
Image synthesize_record(const PairRecord& record, const SynthesisOptions& options = {});

// Writes out_dir/<pair_id>.png for every record. Per-record failures are
// collected, never thrown; the report lists them in manifest order.
SynthesisReport synthesize_dataset(const DatasetManifest& manifest,
                                   const std::filesystem::path& out_dir,
                                   const SynthesisOptions& options = {});

}  // namespace dahaze
