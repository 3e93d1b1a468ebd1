#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <numeric>

#include "dahaze/error.hpp"
#include "dahaze/image_io.hpp"
#include "dahaze/manifest.hpp"
#include "support.hpp"

using namespace dahaze;
using testing_support::TempDir;

namespace {

std::vector<std::string> make_ids(int n) {
  std::vector<std::string> ids;
  for (int i = 0; i < n; ++i) ids.push_back("id" + std::to_string(i));
  return ids;
}

Corpus fake_corpus(int n, const std::string& prefix = "s") {
  Corpus c;
  for (int i = 0; i < n; ++i) {
    const std::string id = prefix + std::to_string(100 + i);
    c.entries.push_back({id, "clear/" + id + ".png", "depth/" + id + ".dahz"});
  }
  return c;
}

std::map<std::string, int> clear_counts(const DatasetManifest& m) {
  std::map<std::string, int> counts;
  for (const auto& r : m.records)
    if (r.split == Split::train) ++counts[r.clear_path.stem().string()];
  return counts;
}

}  // namespace

TEST(Shuffle, IsAPermutation) {
  Rng rng(9);
  for (std::size_t n : {1u, 2u, 3u, 10u, 257u}) {
    auto p = shuffle_indices(n, rng, false);
    std::sort(p.begin(), p.end());
    std::vector<std::size_t> iota(n);
    std::iota(iota.begin(), iota.end(), 0);
    EXPECT_EQ(p, iota);
  }
}

TEST(Shuffle, StrictHasNoFixedPoints) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const std::size_t n = 2 + seed % 9;
    const auto p = shuffle_indices(n, rng, true);
    for (std::size_t i = 0; i < n; ++i) ASSERT_NE(p[i], i) << "seed " << seed << " n " << n;
  }
}

TEST(Pairing, SingleIdNonStrictIsAligned) {
  const auto p = shuffle_pairing({"a"}, {"a"}, 5, false);
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0], (std::pair<std::string, std::string>{"a", "a"}));
}

TEST(Pairing, Errors) {
  EXPECT_THROW(shuffle_pairing({"a"}, {"a"}, 5, true), InvalidArgument);
  EXPECT_THROW(shuffle_pairing({"a", "b"}, {"a"}, 5, false), InvalidArgument);
}

TEST(Pairing, Deterministic) {
  const auto ids = make_ids(50);
  EXPECT_EQ(shuffle_pairing(ids, ids, 123, false), shuffle_pairing(ids, ids, 123, false));
  EXPECT_NE(shuffle_pairing(ids, ids, 123, false), shuffle_pairing(ids, ids, 124, false));
}

TEST(Pairing, StrictThousandIdsNoFixedPoints) {
  const auto ids = make_ids(1000);
  for (std::uint64_t seed : {0ull, 1ull, 0xDA11A5Eull, ~0ull}) {
    const auto p = shuffle_pairing(ids, ids, seed, true);
    std::size_t fixed = 0;
    for (const auto& [c, d] : p) fixed += (c == d);
    EXPECT_EQ(fixed, 0u);
  }
}

TEST(Build, CountsPerReplica) {
  const Corpus corpus = fake_corpus(20);
  for (int n : {1, 2, 3}) {
    BuildOptions opts;
    opts.n = n;
    opts.seed = 7;
    const DatasetManifest m = build_manifest(corpus, opts);
    EXPECT_EQ(m.records.size(), static_cast<std::size_t>(20 * n));
    EXPECT_EQ(m.corpus_size, 20u);
    for (const auto& [id, count] : clear_counts(m)) EXPECT_EQ(count, n) << id;
    EXPECT_TRUE(verify_manifest(m).empty());
  }
}

TEST(Build, RecordsUseSetsAndReplicaIds) {
  BuildOptions opts;
  opts.n = 2;
  const DatasetManifest m = build_manifest(fake_corpus(4), opts);
  for (const auto& r : m.records) EXPECT_TRUE(opts.params.contains(r.params()));
  EXPECT_EQ(m.records.front().pair_id, "s100_x0");
  EXPECT_EQ(m.records.back().pair_id, "s103_x1");
}

TEST(Build, TestSplitFromHeldOutCatalog) {
  BuildOptions opts;
  opts.n = 2;
  opts.strict = true;
  const DatasetManifest m = build_manifest(fake_corpus(10), opts, SplitSpec{fake_corpus(5, "t")});
  std::size_t train = 0, test = 0;
  for (const auto& r : m.records) (r.split == Split::train ? train : test)++;
  EXPECT_EQ(train, 20u);
  EXPECT_EQ(test, 5u);
  EXPECT_EQ(m.corpus_size, 10u);
  EXPECT_EQ(count_fixed_points(m), 0u);
  EXPECT_TRUE(verify_manifest(m, {ParamSpace{}, true}).empty());
}

TEST(Build, AlignedModeKeepsOwnDepth) {
  BuildOptions opts;
  opts.mode = PairingMode::aligned;
  const DatasetManifest m = build_manifest(fake_corpus(6), opts);
  EXPECT_EQ(count_fixed_points(m), 6u);
}

TEST(Build, StrictCorpusOfTwoAndReplicaWarning) {
  BuildOptions opts;
  opts.strict = true;
  opts.n = 3;
  const DatasetManifest m = build_manifest(fake_corpus(2), opts);
  EXPECT_EQ(count_fixed_points(m), 0u);
  // Only one derangement of two items exists, so replicas coincide.
  EXPECT_FALSE(m.warnings.empty());
}

TEST(Build, Errors) {
  BuildOptions opts;
  EXPECT_THROW(build_manifest(Corpus{}, opts), InvalidArgument);
  Corpus dup = fake_corpus(3);
  dup.entries.push_back(dup.entries.front());
  EXPECT_THROW(build_manifest(dup, opts), InvalidArgument);
  opts.n = 0;
  EXPECT_THROW(build_manifest(fake_corpus(3), opts), InvalidArgument);
}

TEST(Verify, DetectsViolations) {
  BuildOptions opts;
  opts.n = 2;
  DatasetManifest m = build_manifest(fake_corpus(5), opts);
  auto dup = m;
  dup.records.push_back(dup.records.front());
  auto v = verify_manifest(dup);
  ASSERT_FALSE(v.empty());
  const bool names_id = std::any_of(v.begin(), v.end(), [&](const Violation& x) {
    return x.kind == Violation::Kind::duplicate_id && x.message.find(m.records.front().pair_id) != std::string::npos;
  });
  EXPECT_TRUE(names_id);

  auto extra = m;
  PairRecord r = extra.records.front();
  r.pair_id = "extra";
  extra.records.push_back(r);
  v = verify_manifest(extra);
  EXPECT_TRUE(std::any_of(v.begin(), v.end(),
                          [](const Violation& x) { return x.kind == Violation::Kind::count_mismatch; }));

  auto bad_param = m;
  bad_param.records[0].beta = 0.5;
  v = verify_manifest(bad_param);
  EXPECT_TRUE(std::any_of(v.begin(), v.end(),
                          [](const Violation& x) { return x.kind == Violation::Kind::param_out_of_set; }));

  auto fixed = m;
  fixed.records[0].depth_path = "depth/" + fixed.records[0].clear_path.stem().string() + ".dahz";
  v = verify_manifest(fixed, {ParamSpace{}, true});
  EXPECT_TRUE(std::any_of(v.begin(), v.end(),
                          [](const Violation& x) { return x.kind == Violation::Kind::fixed_point; }));
}

TEST(Serialize, RoundTripAndFormat) {
  TempDir dir("manifest");
  BuildOptions opts;
  opts.n = 3;
  opts.seed = 0xDA11A5E;
  Corpus corpus;
  for (int i = 0; i < 4; ++i) {
    const std::string id = "p" + std::to_string(i);
    corpus.entries.push_back({id, dir.path() / "clear" / (id + ".png"), dir.path() / "depth" / (id + ".dahz")});
  }
  const DatasetManifest m = build_manifest(corpus, opts);
  const std::string text = format_manifest(m, dir.path());
  EXPECT_EQ(text.rfind("#dahaze-manifest v1 seed=228661854 n=3\n", 0), 0u);
  EXPECT_NE(text.find("\tclear/p0.png\t"), std::string::npos);
  const DatasetManifest back = parse_manifest(text, dir.path());
  EXPECT_EQ(back.seed, m.seed);
  EXPECT_EQ(back.scale_factor, 3);
  EXPECT_EQ(back.records, m.records);
  EXPECT_EQ(format_manifest(back, dir.path()), text);

  write_manifest(m, dir / "m.tsv");
  EXPECT_EQ(read_manifest(dir / "m.tsv").records, m.records);
}

TEST(Serialize, ParseErrors) {
  EXPECT_THROW(parse_manifest("garbage\n", "."), CorruptData);
  EXPECT_THROW(parse_manifest("#dahaze-manifest v1 seed=1 n=1\na\tb\tc\n", "."), CorruptData);
  EXPECT_THROW(parse_manifest("#dahaze-manifest v1 seed=1 n=1\na\tb\tc\tx\t0.9\ttrain\n", "."), CorruptData);
  EXPECT_THROW(read_manifest("/nonexistent/dir/m.tsv"), FileNotFound);
}

TEST(Serialize, ShortestDecimal) {
  EXPECT_EQ(format_shortest(0.1), "0.1");
  EXPECT_EQ(format_shortest(0.85), "0.85");
  EXPECT_EQ(format_shortest(1.0), "1");
  const double third = 1.0 / 3.0;
  EXPECT_EQ(std::stod(format_shortest(third)), third);
}

TEST(Scan, PairsByStemAndPrefersRaw) {
  TempDir dir("scan");
  const auto corpus = testing_support::write_desk_corpus(dir.path(), 3, 8, 1);
  save_depth_png16(testing_support::desk_depth(0, 8, 1), corpus.depth_dir / "scene00.png", 10.0);
  const Corpus c = scan_corpus(corpus.clear_dir, corpus.depth_dir);
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c.entries[0].id, "scene00");
  EXPECT_EQ(c.entries[0].depth_path.extension(), ".dahz");
  std::filesystem::remove(corpus.depth_dir / "scene02.dahz");
  EXPECT_THROW(scan_corpus(corpus.clear_dir, corpus.depth_dir), InvalidArgument);
  EXPECT_THROW(scan_corpus(dir / "nope", corpus.depth_dir), IoError);
}
