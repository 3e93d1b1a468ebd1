#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <system_error>

#include "dahaze/error.hpp"
#include "dahaze/fusion/cost.hpp"
#include "dahaze/fusion/demo.hpp"
#include "dahaze/image_io.hpp"
#include "dahaze/manifest.hpp"
#include "dahaze/metrics.hpp"
#include "dahaze/synthesize.hpp"

namespace dahaze::cli {
namespace fs = std::filesystem;

namespace {

struct PairingArgs {
  std::string clear_dir;
  std::string depth_dir;
  std::string test_clear_dir;
  std::string test_depth_dir;
  int n = 1;
  std::uint64_t seed = kDefaultSeed;
  bool strict = false;
  bool aligned = false;
  std::vector<double> a_set;
  std::vector<double> beta_set;
};

void add_pairing_options(CLI::App& cmd, PairingArgs& a, bool require_catalog) {
  auto* clear = cmd.add_option("--clear", a.clear_dir, "Directory of clear PNG images");
  auto* depth = cmd.add_option("--depth", a.depth_dir, "Directory of depth maps (.dahz or 16-bit .png)");
  if (require_catalog) {
    clear->required();
    depth->required();
  }
  cmd.add_option("--test-clear", a.test_clear_dir, "Held-out clear images for the test split");
  cmd.add_option("--test-depth", a.test_depth_dir, "Depth maps for the held-out test split");
  cmd.add_option("--n", a.n, "Scale factor: depth pairings per clear image")->check(CLI::PositiveNumber);
  cmd.add_option("--seed", a.seed, "Run seed (default 0xDA11A5E)");
  cmd.add_flag("--strict", a.strict, "Never pair an image with its own depth map");
  cmd.add_flag("--aligned", a.aligned, "Keep each image with its own depth map (classic synthesis)");
  cmd.add_option("--a-set", a.a_set, "Atmospheric light values, comma separated")->delimiter(',');
  cmd.add_option("--beta-set", a.beta_set, "Scattering coefficients, comma separated")->delimiter(',');
}

ParamSpace param_space(const PairingArgs& a) {
  ParamSpace p;
  if (!a.a_set.empty()) p.a_set = a.a_set;
  if (!a.beta_set.empty()) p.beta_set = a.beta_set;
  return p;
}

DatasetManifest manifest_from_args(const PairingArgs& a) {
  if (a.strict && a.aligned) throw InvalidArgument("--strict and --aligned are mutually exclusive");
  const Corpus corpus = scan_corpus(a.clear_dir, a.depth_dir);
  SplitSpec split;
  if (!a.test_clear_dir.empty() || !a.test_depth_dir.empty()) {
    if (a.test_clear_dir.empty() || a.test_depth_dir.empty()) {
      throw InvalidArgument("--test-clear and --test-depth must be given together");
    }
    split.test_catalog = scan_corpus(a.test_clear_dir, a.test_depth_dir);
  }
  BuildOptions opts;
  opts.n = a.n;
  opts.seed = a.seed;
  opts.strict = a.strict;
  opts.mode = a.aligned ? PairingMode::aligned : PairingMode::shuffled;
  opts.params = param_space(a);
  return build_manifest(corpus, opts, split);
}

// Violations under the policy the manifest was built with; printed to err.
bool report_violations(const DatasetManifest& m, const PairingArgs& a, std::ostream& err) {
  const auto violations = verify_manifest(m, {param_space(a), a.strict});
  for (const auto& v : violations) err << "violation: " << v.message << "\n";
  return violations.empty();
}

std::vector<std::string> png_names(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw FileNotFound("not a directory: " + dir.string());
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".png") names.push_back(e.path().filename().string());
  }
  std::sort(names.begin(), names.end());
  return names;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string scientific(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

// ---------------------------------------------------------------------------

int cmd_pair(const PairingArgs& a, const std::string& output, std::ostream& out, std::ostream& err) {
  const DatasetManifest m = manifest_from_args(a);
  write_manifest(m, output);
  for (const auto& w : m.warnings) err << "warning: " << w << "\n";
  out << "seed=" << a.seed << "\n";
  out << "corpus_size=" << m.corpus_size << "\n";
  out << "n=" << m.scale_factor << "\n";
  out << "records=" << m.records.size() << "\n";
  out << "fixed_points=" << count_fixed_points(m) << "\n";
  out << "manifest=" << output << "\n";
  return report_violations(m, a, err) ? kOk : kInvariant;
}

struct SynthArgs {
  std::string manifest;
  std::string out_dir;
  int workers = 1;
  double depth_scale = 0.0;
  std::optional<float> normalize;
};

int cmd_synthesize(const PairingArgs& a, const SynthArgs& s, std::ostream& out, std::ostream& err) {
  DatasetManifest m;
  if (!s.manifest.empty()) {
    if (!a.clear_dir.empty() || !a.depth_dir.empty()) {
      throw InvalidArgument("give either --manifest or --clear/--depth, not both");
    }
    std::error_code ec;
    if (fs::is_regular_file(s.manifest, ec) && fs::file_size(s.manifest, ec) == 0) {
      throw InvalidArgument("manifest has no records");
    }
    m = read_manifest(s.manifest);
  } else {
    if (a.clear_dir.empty() || a.depth_dir.empty()) {
      throw InvalidArgument("synthesize needs --manifest or both --clear and --depth");
    }
    m = manifest_from_args(a);
    for (const auto& w : m.warnings) err << "warning: " << w << "\n";
    if (!report_violations(m, a, err)) return kInvariant;
    if (!m.records.empty()) {
      std::error_code ec;
      fs::create_directories(s.out_dir, ec);
      write_manifest(m, fs::path(s.out_dir) / "manifest.tsv");
    }
  }
  if (m.records.empty()) throw InvalidArgument("manifest has no records");

  SynthesisOptions opts;
  opts.workers = s.workers;
  opts.depth_png_scale = s.depth_scale;
  opts.normalize_d_max = s.normalize;
  const SynthesisReport r = synthesize_dataset(m, s.out_dir, opts);

  out << "seed=" << m.seed << "\n";
  out << "records=" << m.records.size() << "\n";
  out << "succeeded=" << r.succeeded << "\n";
  out << "failed=" << r.failures.size() << "\n";
  for (const auto& f : r.failures) out << "failure\t" << f.pair_id << "\t" << f.message << "\n";
  err << "wall_seconds=" << fixed(r.wall_seconds, 3) << "\n";
  return r.failures.empty() ? kOk : kIo;
}

int cmd_evaluate(const std::vector<std::vector<std::string>>& sets, int workers, std::ostream& out,
                 std::ostream& err) {
  if (sets.empty()) throw InvalidArgument("evaluate needs at least one --set NAME RESTORED GT");
  std::vector<SetResult> results;
  for (const auto& s : sets) {
    try {
      results.push_back(evaluate_set(s[1], s[2], s[0], workers));
    } catch (const InvalidArgument& e) {
      throw IoError(e.what());
    }
  }
  err << "seed=" << kDefaultSeed << " (unused: evaluation is deterministic)\n";
  std::vector<double> means;
  for (const auto& r : results) {
    out << format_set_line(r) << "\n";
    if (r.infinite_psnr_count > 0) {
      err << r.set_name << ": " << r.infinite_psnr_count << " pair(s) identical, excluded from the PSNR mean\n";
    }
    means.push_back(r.mean_psnr);
  }
  if (means.size() >= 2) out << format_discrepancy_line(discrepancy(means)) << "\n";
  return kOk;
}

struct BenchArgs {
  std::uint64_t seed = kDefaultSeed;
  int steps = 200;
  fusion::CostConfig cost;
};

int cmd_fusion_bench(const BenchArgs& b, std::ostream& out) {
  out << "# seed=" << b.seed << " steps=" << b.steps << " c=" << b.cost.channels << " block_depth=" << b.cost.block_depth
      << " kernel=" << b.cost.kh << "x" << b.cost.kw << " size=" << b.cost.height << "x" << b.cost.width
      << " expansion=" << b.cost.expansion << "\n";
  out << "fusion\tparams\tflops\tgrad_check_max_rel_err\tfinal_demo_loss\n";
  for (auto kind : {fusion::FusionKind::add, fusion::FusionKind::concat, fusion::FusionKind::csc}) {
    fusion::CostConfig cfg = b.cost;
    cfg.fusion = kind;
    const fusion::Cost cost = fusion::count_cost(cfg);
    const double grad_err = fusion::gradient_check(kind, b.seed);
    const auto trace = fusion::train_fusion_demo(b.seed, kind, b.steps);
    out << fusion::to_string(kind) << "\t" << cost.params << "\t" << cost.flops << "\t" << scientific(grad_err) << "\t"
        << fixed(trace.back(), 9) << "\n";
  }
  return kOk;
}

int cmd_diff(const std::string& a_dir, const std::string& b_dir, const std::string& out_dir, bool signed_too,
             std::ostream& out) {
  const auto a_names = png_names(a_dir);
  const auto b_names = png_names(b_dir);
  std::vector<std::string> common;
  std::set_intersection(a_names.begin(), a_names.end(), b_names.begin(), b_names.end(), std::back_inserter(common));
  if (common.empty()) throw IoError("diff: no matching file names between " + a_dir + " and " + b_dir);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (!fs::is_directory(out_dir)) throw UnwritablePath("cannot create " + out_dir);
  for (const auto& name : common) {
    const Image a = load_image(fs::path(a_dir) / name);
    const Image b = load_image(fs::path(b_dir) / name);
    try {
      save_image(diff_image(a, b), fs::path(out_dir) / name);
      if (signed_too) {
        save_image(signed_diff_image(a, b), fs::path(out_dir) / (fs::path(name).stem().string() + "_signed.png"));
      }
    } catch (const InvalidArgument& e) {
      throw IoError(name + ": " + e.what());
    }
  }
  out << "seed=" << kDefaultSeed << "\n";
  out << "pairs=" << common.size() << "\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Depth-agnostic haze dataset toolkit", "dahaze"};
  app.require_subcommand(1);

  PairingArgs pair_args;
  std::string pair_output;
  auto* pair = app.add_subcommand("pair", "Build a shuffled pairing manifest");
  add_pairing_options(*pair, pair_args, true);
  pair->add_option("-o,--output", pair_output, "Manifest file to write")->required();

  PairingArgs synth_pairing;
  SynthArgs synth_args;
  auto* synth = app.add_subcommand("synthesize", "Render hazy images for a manifest or a catalog");
  synth->add_option("--manifest", synth_args.manifest, "Manifest produced by `pair`");
  add_pairing_options(*synth, synth_pairing, false);
  synth->add_option("--out", synth_args.out_dir, "Output directory")->required();
  synth->add_option("--workers", synth_args.workers, "Worker threads")->check(CLI::PositiveNumber);
  synth->add_option("--depth-scale", synth_args.depth_scale, "Depth at full scale for 16-bit PNG depth maps");
  synth->add_option("--normalize-depth", synth_args.normalize, "Rescale each depth map so its maximum is this value");

  std::vector<std::vector<std::string>> eval_sets;
  int eval_workers = 1;
  auto* eval = app.add_subcommand("evaluate", "PSNR/SSIM per set and cross-set discrepancy");
  eval->add_option("--set", eval_sets, "NAME RESTORED_DIR GT_DIR (repeatable)")
      ->type_size(3)
      ->expected(1, -1)
      ->allow_extra_args(false)
      ->required();
  eval->add_option("--workers", eval_workers, "Worker threads")->check(CLI::PositiveNumber);

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("fusion-bench", "Cost, gradient check and toy training for add/concat/csc");
  bench->add_option("--seed", bench_args.seed, "Run seed (default 0xDA11A5E)");
  bench->add_option("--steps", bench_args.steps, "Gradient steps for the toy trainer")->check(CLI::NonNegativeNumber);
  bench->add_option("--channels", bench_args.cost.channels, "Channels per fusion input")->check(CLI::PositiveNumber);
  bench->add_option("--block-depth", bench_args.cost.block_depth, "Conv layers after fusion")->check(CLI::PositiveNumber);
  bench->add_option("--kernel", bench_args.cost.kh, "Kernel size (square)")->check(CLI::PositiveNumber);
  bench->add_option("--size", bench_args.cost.height, "Spatial size (square)")->check(CLI::PositiveNumber);
  bench->add_option("--expansion", bench_args.cost.expansion, "Block width as a multiple of c")->check(CLI::PositiveNumber);

  std::string diff_a, diff_b, diff_out;
  bool diff_signed = false;
  auto* diff = app.add_subcommand("diff", "Absolute (and optionally signed) difference images");
  diff->add_option("--a", diff_a, "First image directory")->required();
  diff->add_option("--b", diff_b, "Second image directory")->required();
  diff->add_option("--out", diff_out, "Output directory")->required();
  diff->add_flag("--signed", diff_signed, "Also write <name>_signed.png (mid-grey = no change)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (*pair) return cmd_pair(pair_args, pair_output, out, err);
    if (*synth) return cmd_synthesize(synth_pairing, synth_args, out, err);
    if (*eval) return cmd_evaluate(eval_sets, eval_workers, out, err);
    if (*bench) {
      bench_args.cost.kw = bench_args.cost.kh;
      bench_args.cost.width = bench_args.cost.height;
      return cmd_fusion_bench(bench_args, out);
    }
    if (*diff) return cmd_diff(diff_a, diff_b, diff_out, diff_signed, out);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kIo;
  } catch (const InvariantViolation& e) {
    err << "invariant violation: " << e.what() << "\n";
    return kInvariant;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInvariant;
  } catch (const fs::filesystem_error& e) {
    err << "i/o error: " << e.what() << "\n";
    return kIo;
  }
  return kUsage;
}

}  // namespace dahaze::cli
