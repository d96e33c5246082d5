#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "so3align/align.hpp"
#include "so3align/synthesis.hpp"

namespace so3align {

struct ErrorReport {
  std::vector<double> per_pair_errors_deg;
  double mae_deg = std::numeric_limits<double>::quiet_NaN();
  double rmse_deg = std::numeric_limits<double>::quiet_NaN();
  double median_deg = std::numeric_limits<double>::quiet_NaN();
  // (threshold in degrees, fraction of pairs strictly below it).
  std::vector<std::pair<double, double>> success_rates;
  double runtime_seconds = 0.0;
};

struct ScalingReport {
  std::vector<std::int64_t> sizes;
  std::vector<double> seconds;        // median align() wall time per size
  std::optional<double> loglog_slope; // fit over sizes >= window_min
  std::int64_t window_min = 10000;
  bool parallel = false;
};

// Greedy nearest-timestamp pairing: candidate pairs (a_i, nearest b_j) are
// accepted in order of increasing gap, each index used at most once, gaps
// above max_gap (seconds) discarded. Both sets must carry timestamps sorted
// ascending. May legitimately return an empty list.
std::vector<std::pair<int, int>> pair_by_timestamp(const RotationSet& a, const RotationSet& b,
                                                   double max_gap);

// Per-pair geodesic errors between targets and an aligned source set, plus
// summary stats. Throws EmptyPairing when `pairs` is empty.
ErrorReport error_report(const RotationSet& targets, const RotationSet& aligned,
                         const std::vector<std::pair<int, int>>& pairs,
                         const std::vector<double>& thresholds_deg = {1.0, 2.0, 5.0, 10.0});

// Recovery error of an estimated global rotation, in degrees.
double constant_delta_error(const Rotation& r_gt, const Rotation& r_est);

// Wall-time of align() across instance sizes of one scenario (fresh planted
// instance per size, generation excluded from the clock). `repeats` runs per
// size, median kept. Timing is single-threaded unless `parallel` — the
// log-log slope is only meaningful at a fixed thread count.
ScalingReport scaling_benchmark(const std::vector<std::int64_t>& sizes,
                                const ScenarioSpec& scenario, const AlignmentConfig& cfg,
                                int repeats, std::int64_t window_min = 10000,
                                bool parallel = false);

}  // namespace so3align
