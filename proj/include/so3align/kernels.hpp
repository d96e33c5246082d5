#pragma once

#include <Eigen/Core>

#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "so3align/rotation.hpp"

// Data-parallel inner loops. Every kernel exists twice: a serial reference
// under kernels::serial and an OpenMP version under kernels::omp, with a
// dispatching wrapper in kernels:: that picks between them. Results are
// required to be bit-identical across thread counts: histogram kernels only
// merge exact integer counts, the rest are element-wise independent.
namespace so3align::kernels {

// Thread cap: 0 means "whatever OpenMP gives us". Initialised once from the
// SO3_ALIGN_THREADS environment variable; set_thread_cap overrides.
int thread_cap();
void set_thread_cap(int cap);
// Threads a parallel region would actually use for `work_items` items.
int effective_threads(std::size_t work_items);

// Azimuth of v about one coordinate axis, in [0, 2*pi):
//   z: atan2(vy, vx)   x: atan2(vz, vy)   y: atan2(vx, vz)
// Chosen so that a rotation by phi about the axis adds exactly phi to the
// azimuth of every point.
inline double azimuth(const Eigen::Vector3d& v, Axis axis) {
  double a;
  switch (axis) {
    case Axis::X: a = std::atan2(v.z(), v.y()); break;
    case Axis::Y: a = std::atan2(v.x(), v.z()); break;
    default:      a = std::atan2(v.y(), v.x()); break;
  }
  if (a < 0.0) a += 2.0 * M_PI;
  return a;
}

inline int azimuth_bin(const Eigen::Vector3d& v, Axis axis, int bins) {
  const double a = azimuth(v, axis);
  int b = static_cast<int>(static_cast<double>(bins) * a / (2.0 * M_PI));
  return b >= bins ? bins - 1 : b;  // guards a == 2*pi after fp rounding
}

namespace serial {

// out[i] = r * in[i]
void rotate_points(std::span<const Eigen::Vector3d> in, const Eigen::Matrix3d& r,
                   std::span<Eigen::Vector3d> out);

// Bin counts of azimuth(pre * p, axis) over all points. When flip is set,
// points with (pre * p).z() < 0 are reflected through the origin first.
// `out` must be zeroed by the caller and have `bins` entries.
void azimuth_counts(std::span<const Eigen::Vector3d> pts, const Eigen::Matrix3d& pre,
                    Axis axis, int bins, bool flip, std::span<double> out);

// All three axis views in one pass over the points.
void azimuth_counts3(std::span<const Eigen::Vector3d> pts, const Eigen::Matrix3d& pre,
                     int bins, bool flip, std::span<double> out_x,
                     std::span<double> out_y, std::span<double> out_z);

// x[k] = row 0 of rs[k], etc. (transposed rows as column vectors).
void extract_tbvs(std::span<const Eigen::Matrix3d> rs, std::span<Eigen::Vector3d> x,
                  std::span<Eigen::Vector3d> y, std::span<Eigen::Vector3d> z);

// out[k] = geodesic angle between a[pairs[k].first] and b[pairs[k].second], degrees.
void geodesic_errors_deg(std::span<const Eigen::Matrix3d> a, std::span<const Eigen::Matrix3d> b,
                         std::span<const std::pair<int, int>> pairs, std::span<double> out);

}  // namespace serial

namespace omp {

void rotate_points(std::span<const Eigen::Vector3d> in, const Eigen::Matrix3d& r,
                   std::span<Eigen::Vector3d> out);
void azimuth_counts(std::span<const Eigen::Vector3d> pts, const Eigen::Matrix3d& pre,
                    Axis axis, int bins, bool flip, std::span<double> out);
void azimuth_counts3(std::span<const Eigen::Vector3d> pts, const Eigen::Matrix3d& pre,
                     int bins, bool flip, std::span<double> out_x,
                     std::span<double> out_y, std::span<double> out_z);
void extract_tbvs(std::span<const Eigen::Matrix3d> rs, std::span<Eigen::Vector3d> x,
                  std::span<Eigen::Vector3d> y, std::span<Eigen::Vector3d> z);
void geodesic_errors_deg(std::span<const Eigen::Matrix3d> a, std::span<const Eigen::Matrix3d> b,
                         std::span<const std::pair<int, int>> pairs, std::span<double> out);

}  // namespace omp

// Dispatchers: serial below a size threshold or when only one thread is
// available, OpenMP otherwise.
void rotate_points(std::span<const Eigen::Vector3d> in, const Eigen::Matrix3d& r,
                   std::span<Eigen::Vector3d> out);
void azimuth_counts(std::span<const Eigen::Vector3d> pts, const Eigen::Matrix3d& pre,
                    Axis axis, int bins, bool flip, std::span<double> out);
void azimuth_counts3(std::span<const Eigen::Vector3d> pts, const Eigen::Matrix3d& pre,
                     int bins, bool flip, std::span<double> out_x,
                     std::span<double> out_y, std::span<double> out_z);
void extract_tbvs(std::span<const Eigen::Matrix3d> rs, std::span<Eigen::Vector3d> x,
                  std::span<Eigen::Vector3d> y, std::span<Eigen::Vector3d> z);
void geodesic_errors_deg(std::span<const Eigen::Matrix3d> a, std::span<const Eigen::Matrix3d> b,
                         std::span<const std::pair<int, int>> pairs, std::span<double> out);

}  // namespace so3align::kernels
