#include "so3align/rotation.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

#include "so3align/errors.hpp"

namespace so3align {

bool is_rotation(const Eigen::Matrix3d& m, double tol) {
  if (!m.allFinite()) return false;
  const double ortho = (m.transpose() * m - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
  return ortho <= tol && std::abs(m.determinant() - 1.0) <= tol;
}

Rotation axis_rotation(Axis axis, double angle) {
  Vec3 u = Vec3::Zero();
  u[static_cast<int>(axis)] = 1.0;
  return Eigen::AngleAxisd(angle, u).toRotationMatrix();
}

Eigen::MatrixX3d rotate_points(const Eigen::MatrixX3d& points, const Rotation& r) {
  return points * r;
}

double geodesic_angle(const Rotation& r1, const Rotation& r2) {
  const Eigen::Matrix3d rel = r1 * r2.transpose();
  // atan2 of the relative rotation's sine (skew part) and cosine (trace).
  // acos of the trace alone loses half the significant digits near 0 and pi;
  // this form is accurate to machine precision over the whole range.
  const Vec3 skew(rel(2, 1) - rel(1, 2), rel(0, 2) - rel(2, 0), rel(1, 0) - rel(0, 1));
  return std::atan2(0.5 * skew.norm(), 0.5 * (rel.trace() - 1.0));
}

Rotation project_to_so3(const Eigen::Matrix3d& m) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  // Singular values come out sorted descending; the projection is unique
  // only when rank >= 2.
  if (svd.singularValues()(1) < 1e-12) {
    throw DegenerateMatrix();
  }
  const Eigen::Matrix3d ut_v = svd.matrixU() * svd.matrixV().transpose();
  Vec3 s(1.0, 1.0, ut_v.determinant() > 0.0 ? 1.0 : -1.0);
  return svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose();
}

Rotation exp_so3(const Vec3& v) {
  const double angle = v.norm();
  if (angle < 1e-14) return Rotation::Identity();
  return Eigen::AngleAxisd(angle, v / angle).toRotationMatrix();
}

Vec3 log_so3(const Rotation& r) {
  Eigen::AngleAxisd aa(r);
  return aa.angle() * aa.axis();
}

Rotation mean_rotation(const std::vector<Rotation>& rs, MeanMethod method) {
  if (rs.empty()) throw EmptySet("mean_rotation: empty input");
  if (method == MeanMethod::ProjectedArithmetic) {
    Eigen::Matrix3d acc = Eigen::Matrix3d::Zero();
    for (const auto& r : rs) acc += r;
    return project_to_so3(acc / static_cast<double>(rs.size()));
  }
  // Karcher mean: fixed point of tangent-space averaging.
  Rotation mean = rs.front();
  for (int iter = 0; iter < 100; ++iter) {
    Vec3 avg = Vec3::Zero();
    for (const auto& r : rs) avg += log_so3(mean.transpose() * r);
    avg /= static_cast<double>(rs.size());
    if (avg.norm() < 1e-10) return mean;
    mean = mean * exp_so3(avg);
  }
  throw NonConvergent("mean_rotation: Karcher iteration did not converge in 100 steps");
}

Rotation quat_to_rotation(const Eigen::Quaterniond& q) {
  return q.normalized().toRotationMatrix();
}

Eigen::Quaterniond rotation_to_quat(const Rotation& r) {
  return Eigen::Quaterniond(r).normalized();
}

Rotation euler_to_rotation(const EulerAngles& e, EulerOrder order) {
  const Rotation rx = axis_rotation(Axis::X, e.roll);
  const Rotation ry = axis_rotation(Axis::Y, e.pitch);
  const Rotation rz = axis_rotation(Axis::Z, e.yaw);
  switch (order) {
    case EulerOrder::XYZ: return rx * ry * rz;
    case EulerOrder::XZY: return rx * rz * ry;
    case EulerOrder::YXZ: return ry * rx * rz;
    case EulerOrder::YZX: return ry * rz * rx;
    case EulerOrder::ZXY: return rz * rx * ry;
    default:              return rz * ry * rx;
  }
}

EulerAngles rotation_to_euler_xyz(const Rotation& r) {
  // R = Rx(roll) Ry(pitch) Rz(yaw):
  //   r02 = sin(pitch)
  //   r12 = -sin(roll) cos(pitch),  r22 = cos(roll) cos(pitch)
  //   r01 = -cos(pitch) sin(yaw),   r00 = cos(pitch) cos(yaw)
  EulerAngles e;
  e.pitch = std::asin(std::clamp(r(0, 2), -1.0, 1.0));
  if (std::abs(std::cos(e.pitch)) > 1e-9) {
    e.roll = std::atan2(-r(1, 2), r(2, 2));
    e.yaw = std::atan2(-r(0, 1), r(0, 0));
  } else {
    // Gimbal lock: only roll -+ yaw is observable; report it all as roll.
    e.roll = std::atan2(r(2, 1), r(1, 1));
    e.yaw = 0.0;
  }
  return e;
}

}  // namespace so3align
