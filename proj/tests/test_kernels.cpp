#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

#if defined(_OPENMP)
#include <omp.h>
#endif

#include "so3align/kernels.hpp"
#include "so3align/synthesis.hpp"

using namespace so3align;

namespace {

std::vector<Vec3> random_directions(int n, std::uint64_t seed) {
  const auto rots = random_rotations(n, seed);
  std::vector<Vec3> dirs(n);
  for (int i = 0; i < n; ++i) dirs[i] = rots[i] * Vec3::UnitX();
  return dirs;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return false;
  }
  return true;
}

bool same_bits(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a[i].array() == b[i].array()).all()) return false;
  }
  return true;
}

// Restores the global thread settings when a test section ends.
struct ThreadGuard {
  int saved_cap = kernels::thread_cap();
#if defined(_OPENMP)
  int saved_threads = omp_get_max_threads();
#endif
  ~ThreadGuard() {
    kernels::set_thread_cap(saved_cap);
#if defined(_OPENMP)
    omp_set_num_threads(saved_threads);
#endif
  }
};

}  // namespace

TEST_CASE("azimuth histograms sum to the point count on every axis") {
  const auto pts = random_directions(777, 11);
  for (const Axis axis : {Axis::X, Axis::Y, Axis::Z}) {
    std::vector<double> counts(90, 0.0);
    kernels::serial::azimuth_counts(pts, Rotation::Identity(), axis, 90, false, counts);
    CHECK(std::accumulate(counts.begin(), counts.end(), 0.0) == 777.0);
  }
}

TEST_CASE("hand-checked bins") {
  // 45.5 degrees about z lands in bin 45 of 360.
  const double a = rad(45.5);
  const Vec3 v(std::cos(a), std::sin(a), 0.3);
  CHECK(kernels::azimuth_bin(v, Axis::Z, 360) == 45);
  // Negative-angle directions wrap into the upper half of the bin range.
  CHECK(kernels::azimuth_bin(Vec3(1.0, -1e-6, 0.0), Axis::Z, 360) == 359);
  // The x-axis azimuth is measured from +y toward +z.
  CHECK(kernels::azimuth_bin(Vec3(0.0, 0.0, 1.0), Axis::X, 4) == 1);
  // The y-axis azimuth is measured from +z toward +x.
  CHECK(kernels::azimuth_bin(Vec3(1.0, 0.0, 0.0), Axis::Y, 4) == 1);
}

TEST_CASE("hemisphere flip folds the lower half onto the upper half") {
  auto pts = random_directions(500, 12);
  std::vector<Vec3> mirrored = pts;
  for (auto& p : mirrored) {
    if (p.z() < 0.0) p = -p;
  }
  for (const Axis axis : {Axis::X, Axis::Y, Axis::Z}) {
    std::vector<double> flipped(64, 0.0), manual(64, 0.0);
    kernels::serial::azimuth_counts(pts, Rotation::Identity(), axis, 64, true, flipped);
    kernels::serial::azimuth_counts(mirrored, Rotation::Identity(), axis, 64, false, manual);
    CHECK(same_bits(flipped, manual));
  }

  // The flip keys on z *after* the pre-rotation is applied.
  const Rotation pre = axis_rotation(Axis::X, rad(90.0));
  std::vector<Vec3> pre_applied(pts.size());
  kernels::serial::rotate_points(pts, pre, pre_applied);
  for (auto& p : pre_applied) {
    if (p.z() < 0.0) p = -p;
  }
  std::vector<double> a(64, 0.0), b(64, 0.0);
  kernels::serial::azimuth_counts(pts, pre, Axis::Z, 64, true, a);
  kernels::serial::azimuth_counts(pre_applied, Rotation::Identity(), Axis::Z, 64, false, b);
  CHECK(same_bits(a, b));
}

TEST_CASE("parallel kernels match the serial reference bit for bit") {
  const int n = 20000;
  const auto pts = random_directions(n, 13);
  const auto rots = random_rotations(5000, 14);
  const Rotation r = random_rotations(1, 15)[0];
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < 5000; ++i) pairs.emplace_back(i, 4999 - i);

  // Serial reference results, computed once.
  std::vector<Vec3> rot_ref(n);
  kernels::serial::rotate_points(pts, r, rot_ref);
  std::vector<double> hist_ref(360, 0.0);
  kernels::serial::azimuth_counts(pts, r, Axis::Y, 360, true, hist_ref);
  std::vector<double> hx_ref(360, 0.0), hy_ref(360, 0.0), hz_ref(360, 0.0);
  kernels::serial::azimuth_counts3(pts, r, 360, false, hx_ref, hy_ref, hz_ref);
  std::vector<Vec3> x_ref(5000), y_ref(5000), z_ref(5000);
  kernels::serial::extract_tbvs(rots, x_ref, y_ref, z_ref);
  std::vector<double> err_ref(pairs.size());
  kernels::serial::geodesic_errors_deg(rots, rots, pairs, err_ref);

  ThreadGuard guard;
  for (const int nt : {1, 2, 4, 7}) {
#if !defined(_OPENMP)
    if (nt > 1) continue;
#else
    omp_set_num_threads(nt);  // oversubscription is fine for a determinism check
#endif
    kernels::set_thread_cap(0);
    CAPTURE(nt);

    std::vector<Vec3> rot(n);
    kernels::omp::rotate_points(pts, r, rot);
    CHECK(same_bits(rot, rot_ref));

    std::vector<double> hist(360, 0.0);
    kernels::omp::azimuth_counts(pts, r, Axis::Y, 360, true, hist);
    CHECK(same_bits(hist, hist_ref));

    std::vector<double> hx(360, 0.0), hy(360, 0.0), hz(360, 0.0);
    kernels::omp::azimuth_counts3(pts, r, 360, false, hx, hy, hz);
    CHECK(same_bits(hx, hx_ref));
    CHECK(same_bits(hy, hy_ref));
    CHECK(same_bits(hz, hz_ref));

    std::vector<Vec3> x(5000), y(5000), z(5000);
    kernels::omp::extract_tbvs(rots, x, y, z);
    CHECK(same_bits(x, x_ref));
    CHECK(same_bits(y, y_ref));
    CHECK(same_bits(z, z_ref));

    std::vector<double> err(pairs.size());
    kernels::omp::geodesic_errors_deg(rots, rots, pairs, err);
    CHECK(same_bits(err, err_ref));
  }
}

TEST_CASE("the fused three-view histogram equals three single views") {
  const auto pts = random_directions(6000, 16);
  const Rotation pre = random_rotations(1, 17)[0];
  for (const bool flip : {false, true}) {
    std::vector<double> hx(128, 0.0), hy(128, 0.0), hz(128, 0.0);
    kernels::serial::azimuth_counts3(pts, pre, 128, flip, hx, hy, hz);
    std::vector<double> sx(128, 0.0), sy(128, 0.0), sz(128, 0.0);
    kernels::serial::azimuth_counts(pts, pre, Axis::X, 128, flip, sx);
    kernels::serial::azimuth_counts(pts, pre, Axis::Y, 128, flip, sy);
    kernels::serial::azimuth_counts(pts, pre, Axis::Z, 128, flip, sz);
    CHECK(same_bits(hx, sx));
    CHECK(same_bits(hy, sy));
    CHECK(same_bits(hz, sz));
  }
}

TEST_CASE("dispatchers agree with serial on both sides of the size threshold") {
  ThreadGuard guard;
#if defined(_OPENMP)
  omp_set_num_threads(4);
#endif
  kernels::set_thread_cap(0);
  for (const int n : {128, 8192}) {  // below / above the parallel threshold
    const auto pts = random_directions(n, 18);
    const Rotation r = random_rotations(1, 19)[0];
    std::vector<Vec3> got(n), want(n);
    kernels::rotate_points(pts, r, got);
    kernels::serial::rotate_points(pts, r, want);
    CHECK(same_bits(got, want));

    std::vector<double> hg(45, 0.0), hw(45, 0.0);
    kernels::azimuth_counts(pts, r, Axis::Z, 45, false, hg);
    kernels::serial::azimuth_counts(pts, r, Axis::Z, 45, false, hw);
    CHECK(same_bits(hg, hw));
  }
}

TEST_CASE("thread cap") {
  ThreadGuard guard;
  kernels::set_thread_cap(0);
#if defined(_OPENMP)
  omp_set_num_threads(4);
  CHECK(kernels::effective_threads(1000000) == 4);
  kernels::set_thread_cap(2);
  CHECK(kernels::effective_threads(1000000) == 2);
  CHECK(kernels::thread_cap() == 2);
#endif
  // Tiny workloads always run on one thread.
  CHECK(kernels::effective_threads(10) == 1);
  kernels::set_thread_cap(-3);  // nonsense caps mean "no cap"
  CHECK(kernels::thread_cap() == 0);
}
