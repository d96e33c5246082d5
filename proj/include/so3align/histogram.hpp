#pragma once

#include <vector>

#include "so3align/tbv.hpp"

namespace so3align {

// Azimuth occupancy histogram: bins[b] counts points whose azimuth falls in
// [2*pi*b/K, 2*pi*(b+1)/K). Counts are kept as doubles but always hold exact
// integers, so correlation scores are exact as well.
struct AzimuthHistogram {
  std::vector<double> bins;
  int k() const { return static_cast<int>(bins.size()); }
};

// Histogram of point azimuths about `axis` (see kernels::azimuth for the
// per-axis azimuth planes). k must be >= 4.
AzimuthHistogram azimuth_histogram(const S2PointSet& s, Axis axis, int k);

// 2D occupancy grid, rows = polar bins over [0, pi] (angle from +z), cols =
// azimuth bins about z. Summing over the polar axis reproduces
// azimuth_histogram(s, Axis::Z, azimuth_bins). Only used for inspection and
// plotting; the matchers work on the 1D histograms.
Eigen::MatrixXd spherical_grid(const S2PointSet& s, int polar_bins, int azimuth_bins);

struct CorrelationResult {
  int shift = 0;       // argmax in [0, K)
  double peak = 0.0;   // C(shift)
  std::vector<double> full;  // C(s) for every s
};

// Map a shift in [0, K) to its signed representative in (-K/2, K/2].
inline int signed_shift(int s, int k) { return s <= k / 2 ? s : s - k; }

// Circular cross-correlation C(s) = sum_l ha[l] * hb[(l+s) mod K], evaluated
// directly for all K shifts (K is small and constant, so O(K^2) beats FFT
// setup costs and stays exact in integer arithmetic). Ties in the argmax go
// to the smallest |signed_shift|, then to the smaller bin index.
CorrelationResult circular_correlate(const AzimuthHistogram& ha, const AzimuthHistogram& hb);

}  // namespace so3align
