#include "so3align/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "so3align/errors.hpp"
#include "so3align/kernels.hpp"

namespace so3align {

std::vector<std::pair<int, int>> pair_by_timestamp(const RotationSet& a, const RotationSet& b,
                                                   double max_gap) {
  if (!a.has_timestamps() || !b.has_timestamps()) throw MissingTimestamps();
  if (a.timestamps.size() != a.items.size() || b.timestamps.size() != b.items.size()) {
    throw MissingTimestamps("timestamp list length does not match item count");
  }
  if (!std::is_sorted(a.timestamps.begin(), a.timestamps.end()) ||
      !std::is_sorted(b.timestamps.begin(), b.timestamps.end())) {
    throw MissingTimestamps("timestamps must be sorted ascending");
  }

  struct Cand {
    double gap;
    int i;
    int j;
  };
  std::vector<Cand> cands;
  cands.reserve(a.size());
  for (int i = 0; i < static_cast<int>(a.size()); ++i) {
    const double t = a.timestamps[i];
    auto it = std::lower_bound(b.timestamps.begin(), b.timestamps.end(), t);
    // Nearest of the two neighbours around the insertion point.
    int j = -1;
    double gap = std::numeric_limits<double>::infinity();
    if (it != b.timestamps.end()) {
      j = static_cast<int>(it - b.timestamps.begin());
      gap = std::abs(*it - t);
    }
    if (it != b.timestamps.begin()) {
      const int j2 = static_cast<int>(it - b.timestamps.begin()) - 1;
      const double g2 = std::abs(b.timestamps[j2] - t);
      if (g2 < gap) {
        j = j2;
        gap = g2;
      }
    }
    if (j >= 0 && gap <= max_gap) cands.push_back({gap, i, j});
  }

  std::sort(cands.begin(), cands.end(), [](const Cand& l, const Cand& r) {
    return l.gap != r.gap ? l.gap < r.gap : (l.i != r.i ? l.i < r.i : l.j < r.j);
  });

  std::vector<char> a_used(a.size(), 0), b_used(b.size(), 0);
  std::vector<std::pair<int, int>> pairs;
  for (const auto& c : cands) {
    if (a_used[c.i] || b_used[c.j]) continue;
    a_used[c.i] = 1;
    b_used[c.j] = 1;
    pairs.emplace_back(c.i, c.j);
  }
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

ErrorReport error_report(const RotationSet& targets, const RotationSet& aligned,
                         const std::vector<std::pair<int, int>>& pairs,
                         const std::vector<double>& thresholds_deg) {
  if (pairs.empty()) throw EmptyPairing();
  for (const auto& [i, j] : pairs) {
    if (i < 0 || j < 0 || i >= static_cast<int>(targets.size()) ||
        j >= static_cast<int>(aligned.size())) {
      throw EmptyPairing("pair index out of range");
    }
  }

  ErrorReport rep;
  rep.per_pair_errors_deg.resize(pairs.size());
  kernels::geodesic_errors_deg(targets.items, aligned.items, pairs, rep.per_pair_errors_deg);

  const auto& e = rep.per_pair_errors_deg;
  double sum = 0.0, sumsq = 0.0;
  for (double v : e) {
    sum += v;
    sumsq += v * v;
  }
  rep.mae_deg = sum / static_cast<double>(e.size());
  rep.rmse_deg = std::sqrt(sumsq / static_cast<double>(e.size()));

  std::vector<double> sorted = e;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t m = sorted.size();
  rep.median_deg = (m % 2 == 1) ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);

  for (double t : thresholds_deg) {
    const auto below = std::count_if(e.begin(), e.end(), [t](double v) { return v < t; });
    rep.success_rates.emplace_back(t, static_cast<double>(below) / static_cast<double>(m));
  }
  return rep;
}

double constant_delta_error(const Rotation& r_gt, const Rotation& r_est) {
  return deg(geodesic_angle(r_gt, r_est));
}

ScalingReport scaling_benchmark(const std::vector<std::int64_t>& sizes,
                                const ScenarioSpec& scenario, const AlignmentConfig& cfg,
                                int repeats, std::int64_t window_min, bool parallel) {
  if (sizes.empty()) throw Error("InvalidConfig", "scaling_benchmark: no sizes");
  if (repeats < 1) throw Error("InvalidConfig", "scaling_benchmark: repeats >= 1");

  ScalingReport rep;
  rep.sizes = sizes;
  rep.window_min = window_min;
  rep.parallel = parallel;

  const int saved_cap = kernels::thread_cap();
  if (!parallel) kernels::set_thread_cap(1);

  for (std::size_t s = 0; s < sizes.size(); ++s) {
    ScenarioSpec spec = scenario;
    spec.n = static_cast<int>(sizes[s]);
    spec.seed = split_seed(scenario.seed, 100 + s);
    const RotationSet targets = generate_scenario(spec);
    const Rotation r_gt = random_rotations(1, split_seed(scenario.seed, 200 + s))[0];
    const RotationSet sources = plant_global(targets, r_gt, SignedPermutation::identity(), true,
                                             split_seed(scenario.seed, 300 + s));

    std::vector<double> times;
    times.reserve(repeats);
    for (int r = 0; r < repeats; ++r) {
      const auto t0 = std::chrono::steady_clock::now();
      const GlobalAlignment ga = align(targets, sources, cfg);
      const auto t1 = std::chrono::steady_clock::now();
      (void)ga;
      times.push_back(std::chrono::duration<double>(t1 - t0).count());
    }
    std::sort(times.begin(), times.end());
    rep.seconds.push_back(times[times.size() / 2]);
  }

  kernels::set_thread_cap(saved_cap);

  // Least-squares slope of ln(t) against ln(n) over the large-size window.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t s = 0; s < sizes.size(); ++s) {
    if (sizes[s] < window_min || rep.seconds[s] <= 0.0) continue;
    const double x = std::log(static_cast<double>(sizes[s]));
    const double y = std::log(rep.seconds[s]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m >= 2) {
    const double denom = m * sxx - sx * sx;
    if (std::abs(denom) > 1e-12) rep.loglog_slope = (m * sxy - sx * sy) / denom;
  }
  return rep;
}

}  // namespace so3align
