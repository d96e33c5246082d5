// Serial vs OpenMP kernel timings. Thread counts follow OMP_NUM_THREADS /
// SO3_ALIGN_THREADS, so run with different settings to see the scaling.

#include <benchmark/benchmark.h>

#include <utility>
#include <vector>

#include "so3align/kernels.hpp"
#include "so3align/synthesis.hpp"
#include "so3align/tbv.hpp"

using namespace so3align;

namespace {

std::vector<Vec3> points(int n) {
  static std::vector<Vec3> cache;
  if (static_cast<int>(cache.size()) < n) {
    const auto rots = random_rotations(n, 1);
    cache.resize(n);
    for (int i = 0; i < n; ++i) cache[i] = rots[i] * Vec3::UnitX();
  }
  return {cache.begin(), cache.begin() + n};
}

std::vector<Rotation> rotations(int n) {
  static std::vector<Rotation> cache;
  if (static_cast<int>(cache.size()) < n) cache = random_rotations(n, 2);
  return {cache.begin(), cache.begin() + n};
}

const Rotation kPre = random_rotations(1, 3)[0];

void bm_rotate(benchmark::State& state, bool parallel) {
  const int n = static_cast<int>(state.range(0));
  const auto pts = points(n);
  std::vector<Vec3> out(n);
  for (auto _ : state) {
    if (parallel) {
      kernels::omp::rotate_points(pts, kPre, out);
    } else {
      kernels::serial::rotate_points(pts, kPre, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}

void bm_counts3(benchmark::State& state, bool parallel) {
  const int n = static_cast<int>(state.range(0));
  const auto pts = points(n);
  std::vector<double> hx(360), hy(360), hz(360);
  for (auto _ : state) {
    std::fill(hx.begin(), hx.end(), 0.0);
    std::fill(hy.begin(), hy.end(), 0.0);
    std::fill(hz.begin(), hz.end(), 0.0);
    if (parallel) {
      kernels::omp::azimuth_counts3(pts, kPre, 360, false, hx, hy, hz);
    } else {
      kernels::serial::azimuth_counts3(pts, kPre, 360, false, hx, hy, hz);
    }
    benchmark::DoNotOptimize(hz.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}

void bm_extract(benchmark::State& state, bool parallel) {
  const int n = static_cast<int>(state.range(0));
  const auto rs = rotations(n);
  std::vector<Vec3> x(n), y(n), z(n);
  for (auto _ : state) {
    if (parallel) {
      kernels::omp::extract_tbvs(rs, x, y, z);
    } else {
      kernels::serial::extract_tbvs(rs, x, y, z);
    }
    benchmark::DoNotOptimize(z.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}

void bm_errors(benchmark::State& state, bool parallel) {
  const int n = static_cast<int>(state.range(0));
  const auto rs = rotations(n);
  std::vector<std::pair<int, int>> pairs(n);
  for (int i = 0; i < n; ++i) pairs[i] = {i, n - 1 - i};
  std::vector<double> out(n);
  for (auto _ : state) {
    if (parallel) {
      kernels::omp::geodesic_errors_deg(rs, rs, pairs, out);
    } else {
      kernels::serial::geodesic_errors_deg(rs, rs, pairs, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}

void rotate_serial(benchmark::State& s) { bm_rotate(s, false); }
void rotate_omp(benchmark::State& s) { bm_rotate(s, true); }
void counts3_serial(benchmark::State& s) { bm_counts3(s, false); }
void counts3_omp(benchmark::State& s) { bm_counts3(s, true); }
void extract_serial(benchmark::State& s) { bm_extract(s, false); }
void extract_omp(benchmark::State& s) { bm_extract(s, true); }
void errors_serial(benchmark::State& s) { bm_errors(s, false); }
void errors_omp(benchmark::State& s) { bm_errors(s, true); }

}  // namespace

BENCHMARK(rotate_serial)->Arg(10000)->Arg(100000)->Arg(1000000);
BENCHMARK(rotate_omp)->Arg(10000)->Arg(100000)->Arg(1000000);
BENCHMARK(counts3_serial)->Arg(10000)->Arg(100000)->Arg(1000000);
BENCHMARK(counts3_omp)->Arg(10000)->Arg(100000)->Arg(1000000);
BENCHMARK(extract_serial)->Arg(10000)->Arg(100000)->Arg(1000000);
BENCHMARK(extract_omp)->Arg(10000)->Arg(100000)->Arg(1000000);
BENCHMARK(errors_serial)->Arg(10000)->Arg(100000)->Arg(1000000);
BENCHMARK(errors_omp)->Arg(10000)->Arg(100000)->Arg(1000000);

BENCHMARK_MAIN();
