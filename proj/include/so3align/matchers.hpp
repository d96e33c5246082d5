#pragma once

#include <optional>

#include "so3align/histogram.hpp"
#include "so3align/tbv.hpp"

namespace so3align {

enum class MatcherKind { Spmc, Frs, SpmcFrs };

struct MatcherConfig {
  int bins = 360;            // azimuth bins K
  int polar_bins = 180;      // only used by the 2D inspection grid
  bool hemisphere_flip = false;  // reflect points with z < 0 before binning
  int frs_max_iters = 10;    // T
  int frs_tol_bins = 1;      // stop when every |signed shift| <= this
  int hybrid_frs_iters = 5;  // T for the refinement stage of spmc_frs
  MatcherKind kind = MatcherKind::Spmc;

  void validate() const;  // throws on nonsensical values
};

struct MatchResult {
  Rotation rotation = Rotation::Identity();  // maps source points onto target
  double score = 0.0;                        // correlation peak(s), exact integer
  S2PointSet aligned_source;                 // rotation applied to source, order kept
  bool converged = true;
  int iterations = 1;
};

// Single-axis matcher: mean-to-north poles both sets, correlates the two
// azimuth histograms about z, and turns the peak shift into
//   rotation = R_target^T * Rz(2*pi*shift/K) * R_source.
// Exact for points constructed at bin centers; otherwise accurate to the
// bin width. Throws EmptySet / DegenerateMean (message says which side).
MatchResult spmc(const S2PointSet& target, const S2PointSet& source, const MatcherConfig& cfg);

// Fixed-target iterative matcher: only the target is poled north; the
// source is correlated against it in all three axis views per iteration and
// nudged by Rz*Ry*Rx of the peak shifts. Stops when every |signed shift| <=
// frs_tol_bins (checked before updating) or after frs_max_iters, in which
// case the best-scoring iterate is returned with converged = false.
MatchResult frs(const S2PointSet& target, const S2PointSet& source, const MatcherConfig& cfg,
                const std::optional<Rotation>& warm_start = std::nullopt);

// frs warm-started with the spmc solution, running hybrid_frs_iters
// iterations. Inherits spmc's speed and frs's robustness to outliers.
MatchResult spmc_frs(const S2PointSet& target, const S2PointSet& source,
                     const MatcherConfig& cfg);

// Dispatch on cfg.kind.
MatchResult match(const S2PointSet& target, const S2PointSet& source, const MatcherConfig& cfg);

}  // namespace so3align
