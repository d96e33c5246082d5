#include "so3align/align.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "so3align/errors.hpp"
#include "so3align/kernels.hpp"

namespace so3align {

namespace {

// r_bar from three per-axis matches. `corrected` holds the source sets the
// matches were run against (sign/relabeling already applied).
Rotation fuse(const std::array<MatchResult, 3>& res, const std::array<const S2PointSet*, 3>& corrected,
              FusionMethod method) {
  switch (method) {
    case FusionMethod::MeanFrameProcrustes: {
      // Stack the unnormalized mean vectors of the aligned sets and of the
      // raw corrected sets as rows; the Procrustes fit between those two
      // frames is the fused source->target rotation. Row norms carry each
      // axis's concentration, so tighter axes weigh more.
      Eigen::Matrix3d mean_aligned, mean_source;
      for (int u = 0; u < 3; ++u) {
        mean_aligned.row(u) = mean_vector(res[u].aligned_source).transpose();
        mean_source.row(u) = mean_vector(*corrected[u]).transpose();
      }
      return project_to_so3(mean_aligned.transpose() * mean_source);
    }
    case FusionMethod::ProjectedMean:
      return project_to_so3((res[0].rotation + res[1].rotation + res[2].rotation) / 3.0);
    default:
      return mean_rotation({res[0].rotation, res[1].rotation, res[2].rotation},
                           MeanMethod::Karcher);
  }
}

GlobalAlignment maybe_refine(GlobalAlignment ga, const RotationSet& targets,
                             const RotationSet& sources, const AlignmentConfig& cfg) {
  if (!cfg.procrustes_refine) return ga;
  return procrustes_refine(targets, sources, ga, cfg);
}

// Summed three-view correlation-at-zero between the target sets and the
// corrected source sets mapped by r. This is the objective the matchers
// climb, evaluated without re-running them.
double correlation_objective(const TbvTriple& a, const TbvTriple& b_corr, const Rotation& r,
                             const MatcherConfig& cfg) {
  double obj = 0.0;
  for (int u = 0; u < 3; ++u) {
    const Rotation r_t = rotation_to_north(mean_direction(a[u]));
    std::array<AzimuthHistogram, 3> ht, hs;
    for (int v = 0; v < 3; ++v) {
      ht[v].bins.assign(cfg.bins, 0.0);
      hs[v].bins.assign(cfg.bins, 0.0);
    }
    kernels::azimuth_counts3(a[u], r_t, cfg.bins, cfg.hemisphere_flip, ht[0].bins, ht[1].bins,
                             ht[2].bins);
    kernels::azimuth_counts3(b_corr[u], r_t * r, cfg.bins, cfg.hemisphere_flip, hs[0].bins,
                             hs[1].bins, hs[2].bins);
    for (int v = 0; v < 3; ++v) {
      for (int b = 0; b < cfg.bins; ++b) obj += ht[v].bins[b] * hs[v].bins[b];
    }
  }
  return obj;
}

}  // namespace

GlobalAlignment align_axis_consistent(const RotationSet& targets, const RotationSet& sources,
                                      const AlignmentConfig& cfg) {
  if (targets.empty()) throw EmptySet("align: empty target set");
  if (sources.empty()) throw EmptySet("align: empty source set");

  const TbvTriple a = tbvs_from_so3(targets.items);
  const TbvTriple b = tbvs_from_so3(sources.items);

  GlobalAlignment ga;
  ga.l_star = SignedPermutation::identity();
  for (int u = 0; u < 3; ++u) {
    try {
      ga.per_axis[u] = match(a[u], b[u], cfg.matcher);
    } catch (const DegenerateMean& e) {
      throw DegenerateMean(std::string(axis_name(static_cast<Axis>(u))) + "-axis " + e.what());
    }
  }

  ga.r_bar = fuse(ga.per_axis, {&b.x, &b.y, &b.z}, cfg.fusion);
  ga.score = ga.per_axis[0].score + ga.per_axis[1].score + ga.per_axis[2].score;
  ga.converged =
      ga.per_axis[0].converged && ga.per_axis[1].converged && ga.per_axis[2].converged;
  return maybe_refine(std::move(ga), targets, sources, cfg);
}

GlobalAlignment align_pasi(const RotationSet& targets, const RotationSet& sources,
                           const AlignmentConfig& cfg) {
  if (targets.empty()) throw EmptySet("align: empty target set");
  if (sources.empty()) throw EmptySet("align: empty source set");

  const TbvTriple a = tbvs_from_so3(targets.items);
  const TbvTriple b = tbvs_from_so3(sources.items);
  const TbvTriple b_neg{negate(b.x), negate(b.y), negate(b.z)};

  // 18 matches cover every hypothesis: target axis i against +-(source axis j).
  // Index: i * 6 + j * 2 + (0 for +, 1 for -).
  struct Slot {
    MatchResult result;
    bool ok = false;
    std::string error;
  };
  std::array<Slot, 18> table;

  const int nt = kernels::effective_threads(18 * targets.size());
#pragma omp parallel for num_threads(nt) schedule(dynamic) if (nt > 1)
  for (int slot = 0; slot < 18; ++slot) {
    const int i = slot / 6;
    const int j = (slot % 6) / 2;
    const bool neg = (slot % 2) != 0;
    try {
      table[slot].result = match(a[i], neg ? b_neg[j] : b[j], cfg.matcher);
      table[slot].ok = true;
    } catch (const Error& e) {
      table[slot].error = e.what();
    }
  }

  const auto hyps = enumerate_signed_permutations(cfg.proper_only);
  GlobalAlignment ga;
  ga.hypothesis_scores.assign(hyps.size(), std::numeric_limits<double>::quiet_NaN());

  int best = -1;
  double best_score = -std::numeric_limits<double>::infinity();
  std::string first_error;
  for (std::size_t h = 0; h < hyps.size(); ++h) {
    double s = 0.0;
    bool ok = true;
    for (int i = 0; i < 3 && ok; ++i) {
      const Slot& slot = table[i * 6 + hyps[h].pi[i] * 2 + (hyps[h].sign[i] < 0 ? 1 : 0)];
      if (!slot.ok) {
        ok = false;
        if (first_error.empty()) first_error = slot.error;
      } else {
        s += slot.result.score;
      }
    }
    if (!ok) continue;  // leave the NaN marker
    ga.hypothesis_scores[h] = s;
    if (s > best_score) {  // strict: ties keep the earliest in canonical order
      best_score = s;
      best = static_cast<int>(h);
    }
  }
  if (best < 0) {
    throw AllHypothesesDegenerate("all relabeling hypotheses lost a match: " + first_error);
  }

  ga.l_star = hyps[best];
  ga.score = best_score;
  std::array<const S2PointSet*, 3> corrected{};
  for (int i = 0; i < 3; ++i) {
    const int j = ga.l_star.pi[i];
    const bool neg = ga.l_star.sign[i] < 0;
    ga.per_axis[i] = table[i * 6 + j * 2 + (neg ? 1 : 0)].result;
    corrected[i] = neg ? &b_neg[j] : &b[j];
  }
  ga.r_bar = fuse(ga.per_axis, corrected, cfg.fusion);
  ga.converged =
      ga.per_axis[0].converged && ga.per_axis[1].converged && ga.per_axis[2].converged;
  return maybe_refine(std::move(ga), targets, sources, cfg);
}

GlobalAlignment align(const RotationSet& targets, const RotationSet& sources,
                      const AlignmentConfig& cfg) {
  return cfg.pasi ? align_pasi(targets, sources, cfg)
                  : align_axis_consistent(targets, sources, cfg);
}

double pasi_hypothesis_score(const RotationSet& targets, const RotationSet& sources,
                             const SignedPermutation& l, const MatcherConfig& cfg) {
  const TbvTriple a = tbvs_from_so3(targets.items);
  const TbvTriple b_corr = apply_to_triple(l, tbvs_from_so3(sources.items));
  double s = 0.0;
  for (int i = 0; i < 3; ++i) s += match(a[i], b_corr[i], cfg).score;
  return s;
}

GlobalAlignment procrustes_refine(const RotationSet& targets, const RotationSet& sources,
                                  const GlobalAlignment& ga, const AlignmentConfig& cfg) {
  if (sources.empty()) throw EmptySet("procrustes_refine: empty source set");
  const std::size_t n = sources.size();
  for (const auto& m : ga.per_axis) {
    if (m.aligned_source.size() != n) {
      throw Error("InvalidConfig",
                  "procrustes_refine: aligned sets do not match the source set size");
    }
  }

  const TbvTriple a = tbvs_from_so3(targets.items);
  const TbvTriple b_corr = apply_to_triple(ga.l_star, tbvs_from_so3(sources.items));
  const Eigen::Matrix3d l_mat = ga.l_star.matrix();

  // Rebuild a full rotation per source element from its three aligned axis
  // points (they are nearly orthonormal rows), then fit one r_bar to the
  // whole set: minimize sum_k || a_hat_k - (l b_k) r^T ||_F over SO(3).
  Eigen::Matrix3d acc = Eigen::Matrix3d::Zero();
  std::vector<Eigen::Matrix3d> rebuilt(n);
  const int nt = kernels::effective_threads(n);
  const std::ptrdiff_t nn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for num_threads(nt) schedule(static) if (nt > 1)
  for (std::ptrdiff_t k = 0; k < nn; ++k) {
    Eigen::Matrix3d w;
    w.row(0) = ga.per_axis[0].aligned_source[k].transpose();
    w.row(1) = ga.per_axis[1].aligned_source[k].transpose();
    w.row(2) = ga.per_axis[2].aligned_source[k].transpose();
    try {
      rebuilt[k] = project_to_so3(w);
    } catch (const DegenerateMatrix&) {
      rebuilt[k].setZero();  // a flat element simply drops out of the sum
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    acc += rebuilt[k].transpose() * (l_mat * sources.items[k]);
  }

  Rotation refined;
  try {
    refined = project_to_so3(acc);
  } catch (const DegenerateMatrix&) {
    return ga;  // nothing usable; keep the fused estimate
  }

  // Accept only if the summed correlation objective does not degrade.
  const double before = correlation_objective(a, b_corr, ga.r_bar, cfg.matcher);
  const double after = correlation_objective(a, b_corr, refined, cfg.matcher);
  if (after < before) return ga;

  GlobalAlignment out = ga;
  out.r_bar = refined;
  return out;
}

RotationSet apply_alignment(const RotationSet& sources, const GlobalAlignment& ga) {
  RotationSet out;
  out.items.resize(sources.size());
  out.timestamps = sources.timestamps;
  const Eigen::Matrix3d l_mat = ga.l_star.matrix();
  const Eigen::Matrix3d rt = ga.r_bar.transpose();
  const int nt = kernels::effective_threads(sources.size());
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(sources.size());
#pragma omp parallel for num_threads(nt) schedule(static) if (nt > 1)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    out.items[k] = l_mat * sources.items[k] * rt;
  }
  return out;
}

}  // namespace so3align
