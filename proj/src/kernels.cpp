#include "so3align/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace so3align::kernels {

namespace {

int env_thread_cap() {
  const char* v = std::getenv("SO3_ALIGN_THREADS");
  if (!v) return 0;
  const int n = std::atoi(v);
  return n > 0 ? n : 0;
}

std::atomic<int> g_thread_cap{env_thread_cap()};

// Parallelism below this many items costs more than it saves.
constexpr std::size_t kMinParallelItems = 4096;

}  // namespace

int thread_cap() { return g_thread_cap.load(); }
void set_thread_cap(int cap) { g_thread_cap.store(cap > 0 ? cap : 0); }

int effective_threads(std::size_t work_items) {
#if defined(_OPENMP)
  int n = omp_get_max_threads();
  const int cap = thread_cap();
  if (cap > 0) n = std::min(n, cap);
  if (work_items < kMinParallelItems) n = 1;
  return std::max(n, 1);
#else
  (void)work_items;
  return 1;
#endif
}

namespace {

inline Eigen::Vector3d maybe_flip(const Eigen::Vector3d& v, bool flip) {
  return (flip && v.z() < 0.0) ? Eigen::Vector3d(-v) : v;
}

}  // namespace

namespace serial {

void rotate_points(std::span<const Eigen::Vector3d> in, const Eigen::Matrix3d& r,
                   std::span<Eigen::Vector3d> out) {
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = r * in[i];
}

void azimuth_counts(std::span<const Eigen::Vector3d> pts, const Eigen::Matrix3d& pre,
                    Axis axis, int bins, bool flip, std::span<double> out) {
  for (const auto& p : pts) {
    const Eigen::Vector3d v = maybe_flip(pre * p, flip);
    out[azimuth_bin(v, axis, bins)] += 1.0;
  }
}

void azimuth_counts3(std::span<const Eigen::Vector3d> pts, const Eigen::Matrix3d& pre,
                     int bins, bool flip, std::span<double> out_x,
                     std::span<double> out_y, std::span<double> out_z) {
  for (const auto& p : pts) {
    const Eigen::Vector3d v = maybe_flip(pre * p, flip);
    out_x[azimuth_bin(v, Axis::X, bins)] += 1.0;
    out_y[azimuth_bin(v, Axis::Y, bins)] += 1.0;
    out_z[azimuth_bin(v, Axis::Z, bins)] += 1.0;
  }
}

void extract_tbvs(std::span<const Eigen::Matrix3d> rs, std::span<Eigen::Vector3d> x,
                  std::span<Eigen::Vector3d> y, std::span<Eigen::Vector3d> z) {
  for (std::size_t k = 0; k < rs.size(); ++k) {
    x[k] = rs[k].row(0).transpose();
    y[k] = rs[k].row(1).transpose();
    z[k] = rs[k].row(2).transpose();
  }
}

void geodesic_errors_deg(std::span<const Eigen::Matrix3d> a, std::span<const Eigen::Matrix3d> b,
                         std::span<const std::pair<int, int>> pairs, std::span<double> out) {
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    out[k] = deg(geodesic_angle(a[pairs[k].first], b[pairs[k].second]));
  }
}

}  // namespace serial

namespace omp {

void rotate_points(std::span<const Eigen::Vector3d> in, const Eigen::Matrix3d& r,
                   std::span<Eigen::Vector3d> out) {
  const int nt = effective_threads(in.size());
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(in.size());
#pragma omp parallel for num_threads(nt) schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = r * in[i];
}

void azimuth_counts(std::span<const Eigen::Vector3d> pts, const Eigen::Matrix3d& pre,
                    Axis axis, int bins, bool flip, std::span<double> out) {
  const int nt = effective_threads(pts.size());
  std::vector<std::vector<double>> locals(nt, std::vector<double>(bins, 0.0));
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(pts.size());
#pragma omp parallel num_threads(nt)
  {
#if defined(_OPENMP)
    auto& local = locals[omp_get_thread_num()];
#else
    auto& local = locals[0];
#endif
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const Eigen::Vector3d v = maybe_flip(pre * pts[i], flip);
      local[azimuth_bin(v, axis, bins)] += 1.0;
    }
  }
  // Counts are exact integers, so the merge order cannot change the result.
  for (const auto& local : locals) {
    for (int b = 0; b < bins; ++b) out[b] += local[b];
  }
}

void azimuth_counts3(std::span<const Eigen::Vector3d> pts, const Eigen::Matrix3d& pre,
                     int bins, bool flip, std::span<double> out_x,
                     std::span<double> out_y, std::span<double> out_z) {
  const int nt = effective_threads(pts.size());
  std::vector<std::vector<double>> locals(nt, std::vector<double>(3 * bins, 0.0));
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(pts.size());
#pragma omp parallel num_threads(nt)
  {
#if defined(_OPENMP)
    auto& local = locals[omp_get_thread_num()];
#else
    auto& local = locals[0];
#endif
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const Eigen::Vector3d v = maybe_flip(pre * pts[i], flip);
      local[azimuth_bin(v, Axis::X, bins)] += 1.0;
      local[bins + azimuth_bin(v, Axis::Y, bins)] += 1.0;
      local[2 * bins + azimuth_bin(v, Axis::Z, bins)] += 1.0;
    }
  }
  for (const auto& local : locals) {
    for (int b = 0; b < bins; ++b) {
      out_x[b] += local[b];
      out_y[b] += local[bins + b];
      out_z[b] += local[2 * bins + b];
    }
  }
}

void extract_tbvs(std::span<const Eigen::Matrix3d> rs, std::span<Eigen::Vector3d> x,
                  std::span<Eigen::Vector3d> y, std::span<Eigen::Vector3d> z) {
  const int nt = effective_threads(rs.size());
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(rs.size());
#pragma omp parallel for num_threads(nt) schedule(static)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    x[k] = rs[k].row(0).transpose();
    y[k] = rs[k].row(1).transpose();
    z[k] = rs[k].row(2).transpose();
  }
}

void geodesic_errors_deg(std::span<const Eigen::Matrix3d> a, std::span<const Eigen::Matrix3d> b,
                         std::span<const std::pair<int, int>> pairs, std::span<double> out) {
  const int nt = effective_threads(pairs.size());
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(pairs.size());
#pragma omp parallel for num_threads(nt) schedule(static)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    out[k] = deg(geodesic_angle(a[pairs[k].first], b[pairs[k].second]));
  }
}

}  // namespace omp

void rotate_points(std::span<const Eigen::Vector3d> in, const Eigen::Matrix3d& r,
                   std::span<Eigen::Vector3d> out) {
  if (effective_threads(in.size()) > 1) {
    omp::rotate_points(in, r, out);
  } else {
    serial::rotate_points(in, r, out);
  }
}

void azimuth_counts(std::span<const Eigen::Vector3d> pts, const Eigen::Matrix3d& pre,
                    Axis axis, int bins, bool flip, std::span<double> out) {
  if (effective_threads(pts.size()) > 1) {
    omp::azimuth_counts(pts, pre, axis, bins, flip, out);
  } else {
    serial::azimuth_counts(pts, pre, axis, bins, flip, out);
  }
}

void azimuth_counts3(std::span<const Eigen::Vector3d> pts, const Eigen::Matrix3d& pre,
                     int bins, bool flip, std::span<double> out_x,
                     std::span<double> out_y, std::span<double> out_z) {
  if (effective_threads(pts.size()) > 1) {
    omp::azimuth_counts3(pts, pre, bins, flip, out_x, out_y, out_z);
  } else {
    serial::azimuth_counts3(pts, pre, bins, flip, out_x, out_y, out_z);
  }
}

void extract_tbvs(std::span<const Eigen::Matrix3d> rs, std::span<Eigen::Vector3d> x,
                  std::span<Eigen::Vector3d> y, std::span<Eigen::Vector3d> z) {
  if (effective_threads(rs.size()) > 1) {
    omp::extract_tbvs(rs, x, y, z);
  } else {
    serial::extract_tbvs(rs, x, y, z);
  }
}

void geodesic_errors_deg(std::span<const Eigen::Matrix3d> a, std::span<const Eigen::Matrix3d> b,
                         std::span<const std::pair<int, int>> pairs, std::span<double> out) {
  if (effective_threads(pairs.size()) > 1) {
    omp::geodesic_errors_deg(a, b, pairs, out);
  } else {
    serial::geodesic_errors_deg(a, b, pairs, out);
  }
}

}  // namespace so3align::kernels
