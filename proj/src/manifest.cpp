#include "dahaze/manifest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <system_error>

#include "dahaze/error.hpp"
#include "dahaze/image_io.hpp"

namespace dahaze {
namespace fs = std::filesystem;

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

// stem -> path for regular files with one of the given extensions. A stem
// present with several extensions keeps the first extension in `exts` order.
std::map<std::string, fs::path> files_by_stem(const fs::path& dir, std::initializer_list<const char*> exts) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw FileNotFound("not a directory: " + dir.string());
  std::map<std::string, std::pair<std::size_t, fs::path>> best;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string ext = lower(entry.path().extension().string());
    std::size_t rank = 0;
    for (const char* e : exts) {
      if (ext == e) break;
      ++rank;
    }
    if (rank == exts.size()) continue;
    const std::string stem = entry.path().stem().string();
    auto it = best.find(stem);
    if (it == best.end() || rank < it->second.first) best[stem] = {rank, entry.path()};
  }
  std::map<std::string, fs::path> out;
  for (auto& [stem, v] : best) out.emplace(stem, v.second);
  return out;
}

void require_unique(const Corpus& corpus, const char* what) {
  std::set<std::string> seen;
  for (const auto& e : corpus.entries) {
    if (!seen.insert(e.id).second) {
      throw InvalidArgument(std::string(what) + ": duplicate id '" + e.id + "'");
    }
  }
}

}  // namespace

Corpus scan_corpus(const fs::path& clear_dir, const fs::path& depth_dir) {
  const auto clears = files_by_stem(clear_dir, {".png"});
  const auto depths = files_by_stem(depth_dir, {".dahz", ".png"});
  Corpus corpus;
  for (const auto& [stem, clear] : clears) {
    auto it = depths.find(stem);
    if (it == depths.end()) {
      throw InvalidArgument("clear image '" + stem + "' has no depth map in " + depth_dir.string());
    }
    corpus.entries.push_back({stem, clear, it->second});
  }
  if (corpus.empty()) throw InvalidArgument("no clear images found in " + clear_dir.string());
  return corpus;
}

std::string_view to_string(Split s) noexcept { return s == Split::train ? "train" : "test"; }

Split parse_split(std::string_view s) {
  if (s == "train") return Split::train;
  if (s == "test") return Split::test;
  throw CorruptData("unknown split '" + std::string(s) + "'");
}

std::vector<std::size_t> shuffle_indices(std::size_t n, Rng& rng, bool strict) {
  if (strict && n < 2) throw InvalidArgument("strict pairing needs at least two ids");
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  // Fisher-Yates, high index down.
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = rng.below(i);
    std::swap(perm[i - 1], perm[j]);
  }
  if (!strict) return perm;

  std::vector<std::size_t> fixed;
  for (std::size_t i = 0; i < n; ++i) {
    if (perm[i] == i) fixed.push_back(i);
  }
  for (std::size_t f = 0; f + 1 < fixed.size(); f += 2) std::swap(perm[fixed[f]], perm[fixed[f + 1]]);
  if (fixed.size() % 2 == 1) {
    // Every other position is already a non-fixed point, so a swap with any
    // neighbour clears the last one without creating a new one.
    const std::size_t last = fixed.back();
    std::swap(perm[last], perm[(last + 1) % n]);
  }
  return perm;
}

std::vector<std::pair<std::string, std::string>> shuffle_pairing(const std::vector<std::string>& clear_ids,
                                                                 const std::vector<std::string>& depth_ids,
                                                                 std::uint64_t seed, bool strict) {
  if (clear_ids.size() != depth_ids.size()) {
    throw InvalidArgument("shuffle_pairing: clear and depth lists differ in length");
  }
  Rng rng(seed);
  const auto perm = shuffle_indices(clear_ids.size(), rng, strict);
  std::vector<std::pair<std::string, std::string>> out;
  out.reserve(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) out.emplace_back(clear_ids[i], depth_ids[perm[i]]);
  return out;
}

namespace {

void append_pass(std::vector<PairRecord>& out, const Corpus& corpus, std::uint64_t stream_seed,
                 const BuildOptions& options, Split split, const std::string& suffix,
                 std::vector<std::size_t>* perm_out) {
  Rng rng(stream_seed);
  std::vector<std::size_t> perm;
  if (options.mode == PairingMode::aligned) {
    perm.resize(corpus.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  } else {
    perm = shuffle_indices(corpus.size(), rng, options.strict);
  }
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& clear = corpus.entries[i];
    const auto& depth = corpus.entries[perm[i]];
    const HazeParams p = sample_params(rng, options.params);
    out.push_back({clear.id + suffix, clear.clear_path, depth.depth_path, p.beta, p.A, split});
  }
  if (perm_out != nullptr) *perm_out = std::move(perm);
}

}  // namespace

DatasetManifest build_manifest(const Corpus& corpus, const BuildOptions& options, const SplitSpec& split) {
  if (options.n < 1) throw InvalidArgument("scale factor n must be >= 1");
  if (corpus.empty()) throw InvalidArgument("empty clear/depth catalog");
  options.params.validate();
  require_unique(corpus, "train catalog");
  require_unique(split.test_catalog, "test catalog");

  DatasetManifest m;
  m.seed = options.seed;
  m.scale_factor = options.n;
  m.corpus_size = corpus.size();

  std::vector<std::vector<std::size_t>> perms(static_cast<std::size_t>(options.n));
  for (int k = 0; k < options.n; ++k) {
    append_pass(m.records, corpus, sub_seed(options.seed, static_cast<std::uint64_t>(k)), options,
                Split::train, "_x" + std::to_string(k), &perms[static_cast<std::size_t>(k)]);
  }
  if (!split.test_catalog.empty()) {
    append_pass(m.records, split.test_catalog, sub_seed(options.seed, kTestStream), options, Split::test,
                "_test", nullptr);
  }

  if (options.mode == PairingMode::shuffled) {
    for (std::size_t a = 0; a < perms.size(); ++a) {
      for (std::size_t b = a + 1; b < perms.size(); ++b) {
        if (perms[a] == perms[b]) {
          m.warnings.push_back("replicas " + std::to_string(a) + " and " + std::to_string(b) +
                               " drew the same permutation");
        }
      }
    }
  }
  return m;
}

std::size_t count_fixed_points(const DatasetManifest& manifest) {
  return static_cast<std::size_t>(std::count_if(manifest.records.begin(), manifest.records.end(), [](const PairRecord& r) {
    return r.clear_path.stem() == r.depth_path.stem();
  }));
}

std::vector<Violation> verify_manifest(const DatasetManifest& manifest, const ManifestPolicy& policy) {
  std::vector<Violation> out;
  using Kind = Violation::Kind;

  std::set<std::string> ids;
  for (const auto& r : manifest.records) {
    if (!ids.insert(r.pair_id).second) out.push_back({Kind::duplicate_id, "duplicate pair_id '" + r.pair_id + "'"});
    if (r.pair_id.empty() || r.clear_path.empty() || r.depth_path.empty()) {
      out.push_back({Kind::bad_record, "record '" + r.pair_id + "' has an empty field"});
    }
    if (!policy.params.contains(r.params())) {
      out.push_back({Kind::param_out_of_set, "record '" + r.pair_id + "' has (A=" + format_shortest(r.A) +
                                                 ", beta=" + format_shortest(r.beta) + ") outside the configured sets"});
    }
    if (policy.strict && r.clear_path.stem() == r.depth_path.stem()) {
      out.push_back({Kind::fixed_point, "record '" + r.pair_id + "' pairs " + r.clear_path.filename().string() +
                                            " with its own depth map"});
    }
  }

  std::map<std::string, std::size_t> train_counts;
  std::size_t train_total = 0;
  for (const auto& r : manifest.records) {
    if (r.split != Split::train) continue;
    ++train_counts[r.clear_path.lexically_normal().generic_string()];
    ++train_total;
  }
  const auto n = static_cast<std::size_t>(std::max(manifest.scale_factor, 0));
  for (const auto& [clear, count] : train_counts) {
    if (count != n) {
      out.push_back({Kind::count_mismatch, "clear image " + clear + " appears " + std::to_string(count) +
                                               " times in train, expected " + std::to_string(n)});
    }
  }
  if (train_total != n * manifest.corpus_size) {
    out.push_back({Kind::count_mismatch, "train split has " + std::to_string(train_total) + " records, expected " +
                                             std::to_string(n) + " x " + std::to_string(manifest.corpus_size)});
  }
  return out;
}

std::string format_shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

constexpr std::string_view kHeaderPrefix = "#dahaze-manifest v1 seed=";

std::string relative_to(const fs::path& p, const fs::path& base_dir) {
  const fs::path abs_p = fs::absolute(p).lexically_normal();
  const fs::path abs_base = fs::absolute(base_dir.empty() ? fs::path(".") : base_dir).lexically_normal();
  fs::path rel = abs_p.lexically_relative(abs_base);
  if (rel.empty()) rel = abs_p;
  return rel.generic_string();
}

template <typename Int>
Int parse_int(std::string_view s, const char* what) {
  Int v{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw CorruptData(std::string("manifest: bad ") + what + " '" + std::string(s) + "'");
  }
  return v;
}

double parse_double(std::string_view s, const char* what) {
  double v{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw CorruptData(std::string("manifest: bad ") + what + " '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

}  // namespace

std::string format_manifest(const DatasetManifest& manifest, const fs::path& base_dir) {
  std::string out;
  out += kHeaderPrefix;
  out += std::to_string(manifest.seed);
  out += " n=" + std::to_string(manifest.scale_factor) + "\n";
  for (const auto& r : manifest.records) {
    out += r.pair_id;
    out += '\t';
    out += relative_to(r.clear_path, base_dir);
    out += '\t';
    out += relative_to(r.depth_path, base_dir);
    out += '\t';
    out += format_shortest(r.beta);
    out += '\t';
    out += format_shortest(r.A);
    out += '\t';
    out += to_string(r.split);
    out += '\n';
  }
  return out;
}

DatasetManifest parse_manifest(std::string_view text, const fs::path& base_dir) {
  DatasetManifest m;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  bool have_header = false;
  std::set<std::string> train_clears;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!have_header) {
      if (line.substr(0, kHeaderPrefix.size()) != kHeaderPrefix) {
        throw CorruptData("manifest: missing '#dahaze-manifest v1' header");
      }
      const std::string_view rest = line.substr(kHeaderPrefix.size());
      const std::size_t sp = rest.find(" n=");
      if (sp == std::string_view::npos) throw CorruptData("manifest: header lacks n=");
      m.seed = parse_int<std::uint64_t>(rest.substr(0, sp), "seed");
      m.scale_factor = parse_int<int>(rest.substr(sp + 3), "n");
      have_header = true;
      continue;
    }
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    if (fields.size() != 6) {
      throw CorruptData("manifest line " + std::to_string(line_no) + ": expected 6 tab-separated fields, got " +
                        std::to_string(fields.size()));
    }
    PairRecord r;
    r.pair_id = std::string(fields[0]);
    r.clear_path = (base_dir / fs::path(std::string(fields[1]))).lexically_normal();
    r.depth_path = (base_dir / fs::path(std::string(fields[2]))).lexically_normal();
    r.beta = parse_double(fields[3], "beta");
    r.A = parse_double(fields[4], "A");
    r.split = parse_split(fields[5]);
    if (r.split == Split::train) train_clears.insert(r.clear_path.generic_string());
    m.records.push_back(std::move(r));
  }
  if (!have_header) throw CorruptData("manifest: empty file");
  m.corpus_size = train_clears.size();
  return m;
}

void write_manifest(const DatasetManifest& manifest, const fs::path& path) {
  const std::string text = format_manifest(manifest, path.parent_path());
  write_file_bytes(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

DatasetManifest read_manifest(const fs::path& path) {
  const auto bytes = read_file_bytes(path);
  return parse_manifest(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()),
                        path.parent_path());
}

}  // namespace dahaze
