#include "so3align/histogram.hpp"

#include <algorithm>
#include <cmath>

#include "so3align/errors.hpp"
#include "so3align/kernels.hpp"

namespace so3align {

AzimuthHistogram azimuth_histogram(const S2PointSet& s, Axis axis, int k) {
  if (s.empty()) throw EmptySet("azimuth_histogram: empty point set");
  if (k < 4) throw Error("InvalidConfig", "azimuth_histogram: need at least 4 bins");
  AzimuthHistogram h;
  h.bins.assign(k, 0.0);
  kernels::azimuth_counts(s, Eigen::Matrix3d::Identity(), axis, k, false, h.bins);
  return h;
}

Eigen::MatrixXd spherical_grid(const S2PointSet& s, int polar_bins, int azimuth_bins) {
  if (s.empty()) throw EmptySet("spherical_grid: empty point set");
  if (polar_bins < 1 || azimuth_bins < 4) {
    throw Error("InvalidConfig", "spherical_grid: need polar_bins >= 1, azimuth_bins >= 4");
  }
  Eigen::MatrixXd grid = Eigen::MatrixXd::Zero(polar_bins, azimuth_bins);
  for (const auto& v : s) {
    const double polar = std::acos(std::clamp(v.z(), -1.0, 1.0));
    int pb = static_cast<int>(static_cast<double>(polar_bins) * polar / M_PI);
    if (pb >= polar_bins) pb = polar_bins - 1;
    grid(pb, kernels::azimuth_bin(v, Axis::Z, azimuth_bins)) += 1.0;
  }
  return grid;
}

CorrelationResult circular_correlate(const AzimuthHistogram& ha, const AzimuthHistogram& hb) {
  const int k = ha.k();
  if (k != hb.k()) throw MismatchedBins();
  if (k == 0) throw EmptySet("circular_correlate: empty histograms");

  CorrelationResult res;
  res.full.assign(k, 0.0);
  for (int s = 0; s < k; ++s) {
    double c = 0.0;
    for (int l = 0; l < k; ++l) {
      int j = l + s;
      if (j >= k) j -= k;
      c += ha.bins[l] * hb.bins[j];
    }
    res.full[s] = c;
  }

  res.shift = 0;
  res.peak = res.full[0];
  for (int s = 1; s < k; ++s) {
    const double c = res.full[s];
    if (c > res.peak) {
      res.shift = s;
      res.peak = c;
    } else if (c == res.peak) {
      // Prefer the smallest motion; break remaining ties on the raw index.
      const int cur = std::abs(signed_shift(res.shift, k));
      const int alt = std::abs(signed_shift(s, k));
      if (alt < cur) res.shift = s;
    }
  }
  return res;
}

}  // namespace so3align
