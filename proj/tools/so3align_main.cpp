// Command-line front end: simulate planted instances, align rotation-set
// pairs, benchmark scaling, enumerate relabelings, validate results, and
// convert pose CSVs between quaternion conventions.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "so3align/align.hpp"
#include "so3align/errors.hpp"
#include "so3align/evaluation.hpp"
#include "so3align/io.hpp"
#include "so3align/kernels.hpp"
#include "so3align/synthesis.hpp"

using namespace so3align;

namespace {

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

MatcherKind matcher_from_name(const std::string& name) {
  if (name == "spmc") return MatcherKind::Spmc;
  if (name == "frs") return MatcherKind::Frs;
  if (name == "spmc-frs") return MatcherKind::SpmcFrs;
  throw Error("InvalidConfig", "unknown matcher '" + name + "'");
}

FusionMethod fusion_from_name(const std::string& name) {
  if (name == "mean-frame") return FusionMethod::MeanFrameProcrustes;
  if (name == "projected-mean") return FusionMethod::ProjectedMean;
  if (name == "karcher") return FusionMethod::Karcher;
  throw Error("InvalidConfig", "unknown fusion method '" + name + "'");
}

QuatConvention convention_from_name(const std::string& name) {
  if (name == "hamilton") return QuatConvention::Hamilton;
  if (name == "jpl") return QuatConvention::Jpl;
  throw Error("InvalidConfig", "unknown quaternion convention '" + name + "'");
}

SignedPermutation relabel_from_name(const std::string& name, std::uint64_t seed) {
  if (name == "identity") return SignedPermutation::identity();
  if (name == "random") return random_proper_permutation(seed);
  return SignedPermutation::from_mapping(name);
}

// Timestamp pairing wants both sets in time order; simulated (shuffled)
// inputs arrive in arbitrary order, so sort rows, keeping each rotation
// with its timestamp.
RotationSet sorted_by_timestamp(const RotationSet& s) {
  if (!s.has_timestamps()) return s;
  std::vector<std::size_t> order(s.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return s.timestamps[a] < s.timestamps[b];
  });
  RotationSet out;
  out.items.reserve(s.size());
  out.timestamps.reserve(s.size());
  for (std::size_t k : order) {
    out.items.push_back(s.items[k]);
    out.timestamps.push_back(s.timestamps[k]);
  }
  return out;
}

// Shared ingestion options (align, export).
struct CsvArgs {
  std::string cols = "t,x,y,z,qx,qy,qz,qw";
  std::string quat = "hamilton";

  void attach(CLI::App* cmd) {
    cmd->add_option("--cols", cols, "Input column layout, comma separated ('_' skips)")
        ->capture_default_str();
    cmd->add_option("--quat", quat, "Input quaternion convention: hamilton or jpl")
        ->capture_default_str();
  }
  CsvOptions options() const {
    CsvOptions o;
    o.columns = split_csv(cols);
    o.convention = convention_from_name(quat);
    return o;
  }
};

// Matcher/alignment options shared by align and bench.
struct AlignArgs {
  std::string matcher = "spmc-frs";
  std::string fusion = "mean-frame";
  bool axis_consistent = false;
  bool improper = false;
  bool refine = false;
  bool hemisphere_flip = false;
  int bins = 360;
  int polar_bins = 180;
  int frs_iters = 10;
  int frs_tol_bins = 1;
  int hybrid_iters = 5;

  void attach(CLI::App* cmd, bool with_search_flags) {
    cmd->add_option("--matcher", matcher, "spmc, frs, or spmc-frs")->capture_default_str();
    cmd->add_option("--bins", bins, "Azimuth histogram bin count")->capture_default_str();
    cmd->add_option("--frs-iters", frs_iters, "Iteration cap for the frs matcher")
        ->capture_default_str();
    cmd->add_option("--frs-tol-bins", frs_tol_bins, "Convergence tolerance in bins")
        ->capture_default_str();
    cmd->add_option("--hybrid-iters", hybrid_iters, "frs iterations after the spmc warm start")
        ->capture_default_str();
    cmd->add_flag("--hemisphere-flip", hemisphere_flip,
                  "Fold the lower hemisphere into the upper before binning");
    if (with_search_flags) {
      cmd->add_option("--fusion", fusion, "mean-frame, projected-mean, or karcher")
          ->capture_default_str();
      cmd->add_option("--polar-bins", polar_bins, "Polar bin count for 2D grids")
          ->capture_default_str();
      cmd->add_flag("--axis-consistent", axis_consistent,
                    "Assume matching axis roles instead of searching relabelings");
      cmd->add_flag("--improper", improper, "Search all 48 relabelings, not just det +1");
      cmd->add_flag("--refine", refine, "Per-element polish pass after fusion");
    }
  }
  AlignmentConfig config() const {
    AlignmentConfig cfg;
    cfg.matcher.kind = matcher_from_name(matcher);
    cfg.matcher.bins = bins;
    cfg.matcher.polar_bins = polar_bins;
    cfg.matcher.hemisphere_flip = hemisphere_flip;
    cfg.matcher.frs_max_iters = frs_iters;
    cfg.matcher.frs_tol_bins = frs_tol_bins;
    cfg.matcher.hybrid_frs_iters = hybrid_iters;
    cfg.fusion = fusion_from_name(fusion);
    cfg.pasi = !axis_consistent;
    cfg.proper_only = !improper;
    cfg.procrustes_refine = refine;
    cfg.matcher.validate();
    return cfg;
  }
};

void print_alignment(const GlobalAlignment& ga) {
  const Eigen::Quaterniond q = rotation_to_quat(ga.r_bar);
  const EulerAngles e = rotation_to_euler_xyz(ga.r_bar);
  std::cout << "l_star: " << ga.l_star.mapping_string() << " (det "
            << (ga.l_star.det() > 0 ? "+1" : "-1") << ")\n";
  std::cout << "r_bar quat (w x y z): " << q.w() << " " << q.x() << " " << q.y() << " "
            << q.z() << "\n";
  std::cout << "r_bar euler xyz (deg): " << deg(e.roll) << " " << deg(e.pitch) << " "
            << deg(e.yaw) << "\n";
  std::cout << "score: " << ga.score << "  converged: " << (ga.converged ? "yes" : "no")
            << "\n";
}

int run_simulate(int scenario, int n, std::uint64_t seed, int corruption,
                 const std::string& relabel, bool keep_order, const std::string& out_targets,
                 const std::string& out_sources, const std::string& out_truth) {
  RotationSet targets = generate_scenario(ScenarioSpec::stock(scenario, n, seed));
  targets.timestamps.resize(targets.size());
  for (std::size_t i = 0; i < targets.size(); ++i) {
    targets.timestamps[i] = static_cast<double>(i);
  }

  const Rotation r_gt = random_rotations(1, split_seed(seed, 101))[0];
  const SignedPermutation l = relabel_from_name(relabel, split_seed(seed, 102));
  RotationSet sources = plant_global(targets, r_gt, l, !keep_order, split_seed(seed, 103));
  if (corruption > 0) {
    sources = corrupt(sources, CorruptionSpec::level(corruption, split_seed(seed, 104)));
  }

  emit_pose_csv(out_targets, targets);
  emit_pose_csv(out_sources, sources);

  if (!out_truth.empty()) {
    GlobalAlignment truth;
    truth.l_star = l;
    truth.r_bar = r_gt;
    nlohmann::json j = alignment_to_json(truth);
    j["scenario"] = scenario;
    j["n"] = n;
    j["seed"] = seed;
    j["corruption"] = corruption;
    write_json(out_truth, j);
  }

  std::cout << "wrote " << targets.size() << " targets and " << sources.size()
            << " sources (relabel " << l.mapping_string() << ", corruption level "
            << corruption << ")\n";
  return 0;
}

int run_align(const std::string& targets_path, const std::string& sources_path,
              const CsvArgs& csv, const AlignArgs& args, const std::string& out_json,
              const std::string& out_aligned, bool evaluate, double max_gap) {
  const CsvOptions copts = csv.options();
  const RotationSet targets = ingest_pose_csv(targets_path, copts);
  const RotationSet sources = ingest_pose_csv(sources_path, copts);

  const AlignmentConfig cfg = args.config();
  const GlobalAlignment ga = align(targets, sources, cfg);
  print_alignment(ga);

  nlohmann::json j = alignment_to_json(ga);

  RotationSet aligned;
  if (evaluate || !out_aligned.empty()) aligned = apply_alignment(sources, ga);
  if (!out_aligned.empty()) emit_pose_csv(out_aligned, aligned);

  if (evaluate) {
    const RotationSet targets_sorted = sorted_by_timestamp(targets);
    const RotationSet aligned_sorted = sorted_by_timestamp(aligned);
    const auto pairs = pair_by_timestamp(targets_sorted, aligned_sorted, max_gap);
    const ErrorReport rep = error_report(targets_sorted, aligned_sorted, pairs);
    std::cout << "evaluation over " << pairs.size() << " pairs: mae " << rep.mae_deg
              << " deg, rmse " << rep.rmse_deg << " deg, median " << rep.median_deg
              << " deg\n";
    j["evaluation"] = report_to_json(rep);
  }

  if (!out_json.empty()) write_json(out_json, j);
  return 0;
}

int run_bench(const std::string& sizes_text, int scenario, std::uint64_t seed,
              const AlignArgs& args, int repeats, std::int64_t window_min, bool parallel,
              const std::string& out_json) {
  std::vector<std::int64_t> sizes;
  for (const auto& tok : split_csv(sizes_text)) sizes.push_back(std::stoll(tok));

  AlignArgs bench_args = args;
  bench_args.axis_consistent = true;  // scaling is measured on the fixed-axes path
  const ScenarioSpec spec = ScenarioSpec::stock(scenario, 1000, seed);
  const ScalingReport rep =
      scaling_benchmark(sizes, spec, bench_args.config(), repeats, window_min, parallel);

  for (std::size_t i = 0; i < rep.sizes.size(); ++i) {
    std::cout << "n=" << rep.sizes[i] << "  " << rep.seconds[i] << " s\n";
  }
  if (rep.loglog_slope) {
    std::cout << "log-log slope: " << *rep.loglog_slope << "\n";
  } else {
    std::cout << "log-log slope: not enough sizes at or above " << rep.window_min << "\n";
  }
  if (!out_json.empty()) write_json(out_json, scaling_to_json(rep));
  return 0;
}

int run_enumerate(bool improper, const std::string& out_json) {
  const auto all = enumerate_signed_permutations(!improper);
  nlohmann::json j = nlohmann::json::array();
  for (std::size_t i = 0; i < all.size(); ++i) {
    std::cout << i << ": " << all[i].mapping_string() << " (det "
              << (all[i].det() > 0 ? "+1" : "-1") << ")\n";
    nlohmann::json row;
    row["mapping"] = all[i].mapping_string();
    row["det"] = all[i].det();
    for (int r = 0; r < 3; ++r) {
      row["matrix"].push_back({all[i].l(r, 0), all[i].l(r, 1), all[i].l(r, 2)});
    }
    j.push_back(row);
  }
  if (!out_json.empty()) write_json(out_json, j);
  return 0;
}

int run_validate(const std::string& alignment_path, const std::string& truth_path,
                 double tol_deg) {
  const GlobalAlignment ga = alignment_from_json(read_json(alignment_path));
  bool ok = true;
  auto report = [&](bool good, const std::string& what) {
    std::cout << (good ? "[PASS] " : "[FAIL] ") << what << "\n";
    ok = ok && good;
  };

  report(is_rotation(ga.r_bar, 1e-6), "r_bar is a proper rotation");
  bool perm_ok = true;
  try {
    (void)SignedPermutation::from_matrix(ga.l_star.l);
  } catch (const InvalidMapping&) {
    perm_ok = false;
  }
  report(perm_ok, "l_star is a signed permutation");
  report(std::isfinite(ga.score), "score is finite");

  if (!truth_path.empty()) {
    const GlobalAlignment truth = alignment_from_json(read_json(truth_path));
    report(ga.l_star == truth.l_star, "l_star matches the planted relabeling");
    const double err = deg(geodesic_angle(ga.r_bar, truth.r_bar));
    std::ostringstream os;
    os << "r_bar within " << tol_deg << " deg of the planted rotation (got " << err << ")";
    report(err <= tol_deg, os.str());
  }
  return ok ? 0 : 1;
}

int run_export(const std::string& in_path, const std::string& out_path, const CsvArgs& csv,
               const std::string& to_quat) {
  RotationSet set = ingest_pose_csv(in_path, csv.options());
  if (convention_from_name(to_quat) == QuatConvention::Jpl) {
    // A JPL file holding q represents the rotation of conj(q), so writing
    // the transposed rotations through the Hamilton writer lands correctly.
    for (auto& r : set.items) r.transposeInPlace();
  }
  emit_pose_csv(out_path, set);
  std::cout << "wrote " << set.size() << " rows to " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Alignment of unpaired 3D rotation sets via spherical correlation"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from a TOML/INI file");
  int threads = 0;
  app.add_option("--threads", threads, "Cap worker threads (0 = automatic)");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Generate a planted benchmark instance");
  int scenario = 1, n = 2000, corruption = 0;
  std::uint64_t seed = 0;
  std::string relabel = "identity";
  bool keep_order = false;
  std::string out_targets, out_sources, out_truth;
  sim->add_option("--scenario", scenario, "Stock scenario 1, 2 or 3")
      ->check(CLI::Range(1, 3))
      ->capture_default_str();
  sim->add_option("-n,--size", n, "Elements per set")->capture_default_str();
  sim->add_option("--seed", seed, "Master seed")->capture_default_str();
  sim->add_option("--corruption", corruption, "Corruption ladder level, 0 (none) to 7")
      ->check(CLI::Range(0, 7))
      ->capture_default_str();
  sim->add_option("--relabel", relabel,
                  "Planted relabeling: identity, random, or an explicit mapping like "
                  "\"Ax->-By, Ay->+Bx, Az->+Bz\"")
      ->capture_default_str();
  sim->add_flag("--keep-order", keep_order, "Skip the source-set shuffle");
  sim->add_option("--out-targets", out_targets, "Target pose CSV path")->required();
  sim->add_option("--out-sources", out_sources, "Source pose CSV path")->required();
  sim->add_option("--out", out_truth, "Ground-truth JSON path");

  // align
  auto* aln = app.add_subcommand("align", "Align a source rotation set onto a target set");
  std::string targets_path, sources_path, align_out, out_aligned;
  bool evaluate = false;
  double max_gap = 0.1;
  CsvArgs align_csv;
  AlignArgs align_args;
  aln->add_option("targets", targets_path, "Target pose CSV")->required();
  aln->add_option("sources", sources_path, "Source pose CSV")->required();
  align_csv.attach(aln);
  align_args.attach(aln, true);
  aln->add_option("--out", align_out, "Alignment JSON path");
  aln->add_option("--out-aligned", out_aligned, "Aligned source pose CSV path");
  aln->add_flag("--evaluate", evaluate, "Pair by timestamp and report per-pair errors");
  aln->add_option("--max-gap", max_gap, "Pairing gap limit in seconds")
      ->capture_default_str();

  // bench
  auto* ben = app.add_subcommand("bench", "Measure align() wall time across instance sizes");
  std::string sizes_text = "10000,100000,1000000";
  int bench_scenario = 1, repeats = 3;
  std::uint64_t bench_seed = 0;
  std::int64_t window_min = 10000;
  bool parallel = false;
  std::string bench_out;
  AlignArgs bench_args;
  bench_args.matcher = "spmc";
  ben->add_option("--sizes", sizes_text, "Comma-separated instance sizes")
      ->capture_default_str();
  ben->add_option("--scenario", bench_scenario, "Stock scenario 1, 2 or 3")
      ->check(CLI::Range(1, 3))
      ->capture_default_str();
  ben->add_option("--seed", bench_seed, "Master seed")->capture_default_str();
  ben->add_option("--repeats", repeats, "Timed runs per size (median kept)")
      ->capture_default_str();
  ben->add_option("--window-min", window_min, "Smallest size included in the slope fit")
      ->capture_default_str();
  ben->add_flag("--parallel", parallel, "Time with threads enabled instead of one thread");
  bench_args.attach(ben, false);
  ben->add_option("--out", bench_out, "Scaling report JSON path");

  // enumerate-l
  auto* enu = app.add_subcommand("enumerate-l", "List the signed axis relabelings");
  bool enum_improper = false;
  std::string enum_out;
  enu->add_flag("--improper", enum_improper, "List all 48 instead of the 24 proper ones");
  enu->add_option("--out", enum_out, "JSON list path");

  // validate
  auto* val = app.add_subcommand("validate", "Check an alignment JSON, optionally vs truth");
  std::string val_alignment, val_truth;
  double tol_deg = 1.0;
  val->add_option("alignment", val_alignment, "Alignment JSON to check")->required();
  val->add_option("--truth", val_truth, "Ground-truth JSON from simulate --out");
  val->add_option("--tol-deg", tol_deg, "Allowed r_bar error vs truth, degrees")
      ->capture_default_str();

  // export
  auto* exp = app.add_subcommand("export", "Rewrite a pose CSV in canonical layout");
  std::string exp_in, exp_out, to_quat = "hamilton";
  CsvArgs export_csv;
  exp->add_option("input", exp_in, "Input pose CSV")->required();
  exp->add_option("output", exp_out, "Output pose CSV")->required();
  export_csv.attach(exp);
  exp->add_option("--to-quat", to_quat, "Output quaternion convention: hamilton or jpl")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // 0 covers --help and --version
  }

  try {
    kernels::set_thread_cap(threads);
    if (*sim) {
      return run_simulate(scenario, n, seed, corruption, relabel, keep_order, out_targets,
                          out_sources, out_truth);
    }
    if (*aln) {
      return run_align(targets_path, sources_path, align_csv, align_args, align_out,
                       out_aligned, evaluate, max_gap);
    }
    if (*ben) {
      return run_bench(sizes_text, bench_scenario, bench_seed, bench_args, repeats, window_min,
                       parallel, bench_out);
    }
    if (*enu) return run_enumerate(enum_improper, enum_out);
    if (*val) return run_validate(val_alignment, val_truth, tol_deg);
    if (*exp) return run_export(exp_in, exp_out, export_csv, to_quat);
  } catch (const Error& e) {
    nlohmann::json err;
    err["error"]["type"] = e.kind();
    err["error"]["message"] = e.what();
    std::cerr << err.dump() << std::endl;
    return 1;
  } catch (const std::exception& e) {
    nlohmann::json err;
    err["error"]["type"] = "Internal";
    err["error"]["message"] = e.what();
    std::cerr << err.dump() << std::endl;
    return 1;
  }
  return 0;
}
