#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dahaze/haze.hpp"

namespace dahaze {

/// One clear image with its own (aligned) depth map. The id is the shared
/// file stem.
struct CorpusEntry {
  std::string id;
  std::filesystem::path clear_path;
  std::filesystem::path depth_path;
};

/// Ordered catalog of clear/depth pairs, sorted by id.
struct Corpus {
  std::vector<CorpusEntry> entries;

  std::size_t size() const noexcept { return entries.size(); }
  bool empty() const noexcept { return entries.empty(); }
};

// Pairs `<stem>.png` in clear_dir with `<stem>.dahz` or `<stem>.png` in
// depth_dir. Clear images without a depth map are an InvalidArgument, as is
// an empty result.
Corpus scan_corpus(const std::filesystem::path& clear_dir, const std::filesystem::path& depth_dir);

enum class Split { train, test };

std::string_view to_string(Split s) noexcept;
Split parse_split(std::string_view s);

struct PairRecord {
  std::string pair_id;
  std::filesystem::path clear_path;
  std::filesystem::path depth_path;
  double beta = 0.0;
  double A = 0.0;
  Split split = Split::train;

  HazeParams params() const noexcept { return {A, beta}; }
  friend bool operator==(const PairRecord&, const PairRecord&) = default;
};

struct DatasetManifest {
  std::vector<PairRecord> records;
  std::uint64_t seed = 0;
  int scale_factor = 1;
  // Distinct clear images in the train split.
  std::size_t corpus_size = 0;
  // Non-fatal notes from construction (e.g. two identical replicas). Not
  // serialised.
  std::vector<std::string> warnings;
};

/// Index permutation over n depth maps: seeded Fisher-Yates, then in strict
/// mode one pass that swaps fixed points pairwise (a lone leftover is swapped
/// with its successor). perm[i] is the depth index given to clear image i.
std::vector<std::size_t> shuffle_indices(std::size_t n, Rng& rng, bool strict);

// clear_ids[i] is aligned with depth_ids[i]. Throws InvalidArgument on
// unequal lengths and on strict mode with a single id.
std::vector<std::pair<std::string, std::string>> shuffle_pairing(
    const std::vector<std::string>& clear_ids, const std::vector<std::string>& depth_ids,
    std::uint64_t seed, bool strict);

struct SplitSpec {
  // Held-out catalog shuffled once into test records. Empty = no test split.
  Corpus test_catalog;
};

enum class PairingMode { shuffled, aligned };

struct BuildOptions {
  int n = 1;
  std::uint64_t seed = 0;
  bool strict = false;
  PairingMode mode = PairingMode::shuffled;
  ParamSpace params;
};

// Stream index used for the test split's sub-seed; replicas use 0..n-1.
inline constexpr std::uint64_t kTestStream = ~std::uint64_t{0};

/// Global-shuffle manifest: replica k pairs every train image with one depth
/// map from a permutation drawn with sub_seed(seed, k), then draws (A, beta)
/// per record from the same stream, in record order.
DatasetManifest build_manifest(const Corpus& corpus, const BuildOptions& options,
                               const SplitSpec& split = {});

struct ManifestPolicy {
  ParamSpace params;
  bool strict = false;
};

struct Violation {
  enum class Kind { duplicate_id, count_mismatch, fixed_point, param_out_of_set, bad_record };
  Kind kind;
  std::string message;
};

// All invariant violations; empty iff the manifest is valid under `policy`.
std::vector<Violation> verify_manifest(const DatasetManifest& manifest,
                                       const ManifestPolicy& policy = {});

// Records pairing a clear image with its own depth map (same file stem).
std::size_t count_fixed_points(const DatasetManifest& manifest);

// Text form: "#dahaze-manifest v1 seed=<u64> n=<int>" then one tab-separated
// line per record (pair_id, clear_path, depth_path, beta, A, split). Paths are
// written relative to base_dir and resolved against it on parse.
std::string format_manifest(const DatasetManifest& manifest, const std::filesystem::path& base_dir);
DatasetManifest parse_manifest(std::string_view text, const std::filesystem::path& base_dir);

void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);
DatasetManifest read_manifest(const std::filesystem::path& path);

// Shortest decimal that parses back to the same double.
std::string format_shortest(double v);

}  // namespace dahaze
