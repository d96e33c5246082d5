#include "so3align/matchers.hpp"

#include <array>
#include <cmath>

#include "so3align/errors.hpp"
#include "so3align/kernels.hpp"

namespace so3align {

namespace {

Vec3 mean_direction_of(const S2PointSet& s, const char* side) {
  try {
    return mean_direction(s);
  } catch (const DegenerateMean& e) {
    throw DegenerateMean(std::string(side) + " set: " + e.what());
  }
}

// Histogram of azimuths about `axis` after rotating every point by `pre`.
AzimuthHistogram rotated_histogram(const S2PointSet& s, const Eigen::Matrix3d& pre, Axis axis,
                                   const MatcherConfig& cfg) {
  AzimuthHistogram h;
  h.bins.assign(cfg.bins, 0.0);
  kernels::azimuth_counts(s, pre, axis, cfg.bins, cfg.hemisphere_flip, h.bins);
  return h;
}

std::array<AzimuthHistogram, 3> rotated_histogram3(const S2PointSet& s,
                                                   const Eigen::Matrix3d& pre,
                                                   const MatcherConfig& cfg) {
  std::array<AzimuthHistogram, 3> h;
  for (auto& hh : h) hh.bins.assign(cfg.bins, 0.0);
  kernels::azimuth_counts3(s, pre, cfg.bins, cfg.hemisphere_flip, h[0].bins, h[1].bins,
                           h[2].bins);
  return h;
}

}  // namespace

void MatcherConfig::validate() const {
  if (bins < 4) throw Error("InvalidConfig", "bins must be >= 4");
  if (polar_bins < 1) throw Error("InvalidConfig", "polar_bins must be >= 1");
  if (frs_max_iters < 1) throw Error("InvalidConfig", "frs_max_iters must be >= 1");
  if (hybrid_frs_iters < 1) throw Error("InvalidConfig", "hybrid_frs_iters must be >= 1");
  if (frs_tol_bins < 0 || frs_tol_bins > bins / 4) {
    throw Error("InvalidConfig", "frs_tol_bins out of range");
  }
}

MatchResult spmc(const S2PointSet& target, const S2PointSet& source, const MatcherConfig& cfg) {
  cfg.validate();
  if (target.empty()) throw EmptySet("spmc: empty target set");
  if (source.empty()) throw EmptySet("spmc: empty source set");

  const Rotation r_t = rotation_to_north(mean_direction_of(target, "target"));
  const Rotation r_s = rotation_to_north(mean_direction_of(source, "source"));

  const AzimuthHistogram ht = rotated_histogram(target, r_t, Axis::Z, cfg);
  const AzimuthHistogram hs = rotated_histogram(source, r_s, Axis::Z, cfg);

  // With the source histogram in the first slot, the correlation peaks at
  // the number of bins to ADD to source azimuths to land on the target's,
  // so the in-between spin is Rz of exactly that angle.
  const CorrelationResult corr = circular_correlate(hs, ht);
  const double angle = 2.0 * M_PI * static_cast<double>(signed_shift(corr.shift, cfg.bins)) /
                       static_cast<double>(cfg.bins);

  MatchResult res;
  res.rotation = r_t.transpose() * axis_rotation(Axis::Z, angle) * r_s;
  res.score = corr.peak;
  res.aligned_source = apply_rotation(source, res.rotation);
  res.converged = true;
  res.iterations = 1;
  return res;
}

MatchResult frs(const S2PointSet& target, const S2PointSet& source, const MatcherConfig& cfg,
                const std::optional<Rotation>& warm_start) {
  cfg.validate();
  if (target.empty()) throw EmptySet("frs: empty target set");
  if (source.empty()) throw EmptySet("frs: empty source set");

  const Rotation r_t = rotation_to_north(mean_direction_of(target, "target"));
  const auto ht = rotated_histogram3(target, r_t, cfg);

  const double bin_angle = 2.0 * M_PI / static_cast<double>(cfg.bins);

  // Composite applied to source points, tracked in the target's north-poled
  // frame so the per-axis nudges compose on the left.
  Rotation composite = warm_start ? Rotation(r_t * (*warm_start)) : r_t;

  Rotation best_composite = composite;
  double best_score = -1.0;
  MatchResult res;

  for (int iter = 0; iter < cfg.frs_max_iters; ++iter) {
    const auto hs = rotated_histogram3(source, composite, cfg);

    std::array<int, 3> shift{};
    double score = 0.0;
    for (int u = 0; u < 3; ++u) {
      const CorrelationResult corr = circular_correlate(hs[u], ht[u]);
      shift[u] = signed_shift(corr.shift, cfg.bins);
      score += corr.peak;
    }
    if (score > best_score) {
      best_score = score;
      best_composite = composite;
    }
    res.iterations = iter + 1;

    if (std::abs(shift[0]) <= cfg.frs_tol_bins && std::abs(shift[1]) <= cfg.frs_tol_bins &&
        std::abs(shift[2]) <= cfg.frs_tol_bins) {
      res.rotation = r_t.transpose() * composite;
      res.score = score;
      res.converged = true;
      res.aligned_source = apply_rotation(source, res.rotation);
      return res;
    }

    const Rotation inc = axis_rotation(Axis::Z, shift[2] * bin_angle) *
                         axis_rotation(Axis::Y, shift[1] * bin_angle) *
                         axis_rotation(Axis::X, shift[0] * bin_angle);
    composite = inc * composite;
  }

  // Out of iterations: hand back the best-scoring iterate, flagged.
  res.rotation = r_t.transpose() * best_composite;
  res.score = best_score;
  res.converged = false;
  res.aligned_source = apply_rotation(source, res.rotation);
  return res;
}

MatchResult spmc_frs(const S2PointSet& target, const S2PointSet& source,
                     const MatcherConfig& cfg) {
  const MatchResult coarse = spmc(target, source, cfg);
  MatcherConfig fine_cfg = cfg;
  fine_cfg.frs_max_iters = cfg.hybrid_frs_iters;
  return frs(target, source, fine_cfg, coarse.rotation);
}

MatchResult match(const S2PointSet& target, const S2PointSet& source, const MatcherConfig& cfg) {
  switch (cfg.kind) {
    case MatcherKind::Spmc: return spmc(target, source, cfg);
    case MatcherKind::Frs: return frs(target, source, cfg);
    default: return spmc_frs(target, source, cfg);
  }
}

}  // namespace so3align
