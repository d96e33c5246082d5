#pragma once

#include <array>
#include <vector>

#include "so3align/matchers.hpp"
#include "so3align/signed_permutation.hpp"

namespace so3align {

// How the three per-axis rotation estimates are fused into one r_bar.
enum class FusionMethod {
  MeanFrameProcrustes,  // Procrustes between the mean-vector frames (default)
  ProjectedMean,        // project the entrywise average of the three rotations
  Karcher,              // Karcher mean of the three rotations
};

struct AlignmentConfig {
  MatcherConfig matcher;
  FusionMethod fusion = FusionMethod::MeanFrameProcrustes;
  bool pasi = false;              // search over axis relabelings
  bool proper_only = true;        // restrict the search to det +1 (24 hypotheses)
  bool procrustes_refine = false; // per-element refinement pass after fusion
};

// Result of aligning a source rotation set onto a target rotation set under
// the model  b = L^T * a * r_bar  (elementwise, up to noise):
//   l_star  relabels source axes onto target axes,
//   r_bar   is the remaining in-frame rotation,
// and the aligned set is  l_star * b * r_bar^T.
struct GlobalAlignment {
  SignedPermutation l_star;
  Rotation r_bar = Rotation::Identity();
  std::array<MatchResult, 3> per_axis;    // selected matches for target x/y/z
  double score = 0.0;                     // sum of the three per-axis scores
  std::vector<double> hypothesis_scores;  // every hypothesis, canonical order
                                          // (empty when pasi was off; NaN marks
                                          //  hypotheses killed by degeneracy)
  bool converged = true;
};

// Fixed axis pairing (l_star = identity): match the x sets, y sets, z sets
// and fuse. This is the fast path when frames are known to share axis roles.
GlobalAlignment align_axis_consistent(const RotationSet& targets, const RotationSet& sources,
                                      const AlignmentConfig& cfg);

// Full search: run the matcher on all 18 (target axis, source axis, sign)
// combinations, score each signed permutation L as the sum of its three
// entries, keep the best. Throws AllHypothesesDegenerate when no hypothesis
// has three usable matches.
GlobalAlignment align_pasi(const RotationSet& targets, const RotationSet& sources,
                           const AlignmentConfig& cfg);

// Dispatch on cfg.pasi; applies procrustes_refine afterwards when asked.
GlobalAlignment align(const RotationSet& targets, const RotationSet& sources,
                      const AlignmentConfig& cfg);

// Score a single relabeling hypothesis from scratch (no shared match table).
// Used to cross-check align_pasi's bookkeeping.
double pasi_hypothesis_score(const RotationSet& targets, const RotationSet& sources,
                             const SignedPermutation& l, const MatcherConfig& cfg);

// Per-element polish: rebuild one rotation per source element from its three
// aligned axis points, fit the single best r_bar to all of them, and keep it
// only if it does not lower the summed correlation objective. Returns the
// input alignment otherwise.
GlobalAlignment procrustes_refine(const RotationSet& targets, const RotationSet& sources,
                                  const GlobalAlignment& ga, const AlignmentConfig& cfg);

// Apply: every source item b becomes l_star * b * r_bar^T; timestamps kept.
RotationSet apply_alignment(const RotationSet& sources, const GlobalAlignment& ga);

}  // namespace so3align
