#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <vector>

namespace so3align {

// 3x3 proper orthogonal matrix. Column convention throughout the library:
// a rotation acts on a column vector as v' = R * v. The one row-convention
// surface is rotate_points(), which follows the usual "points are rows"
// layout P' = P * R used by trajectory files.
using Rotation = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;

enum class Axis : int { X = 0, Y = 1, Z = 2 };

inline const char* axis_name(Axis a) {
  switch (a) {
    case Axis::X: return "x";
    case Axis::Y: return "y";
    default: return "z";
  }
}

// Intrinsic Euler conventions; letters give the composition order, e.g.
// XYZ means R = Rx(roll) * Ry(pitch) * Rz(yaw). roll/pitch/yaw are always
// the angles about x/y/z respectively, in radians.
enum class EulerOrder { XYZ, XZY, YXZ, YZX, ZXY, ZYX };

struct EulerAngles {
  double roll = 0.0;
  double pitch = 0.0;
  double yaw = 0.0;
};

// Unordered set of rotations with optional per-element timestamps (seconds).
// timestamps is either empty or the same length as items.
struct RotationSet {
  std::vector<Rotation> items;
  std::vector<double> timestamps;

  std::size_t size() const { return items.size(); }
  bool empty() const { return items.empty(); }
  bool has_timestamps() const { return !timestamps.empty(); }
};

// True iff R^T R = I within tol and det(R) = +1 within tol.
bool is_rotation(const Eigen::Matrix3d& m, double tol = 1e-9);

// Rotation by `angle` radians about one coordinate axis.
Rotation axis_rotation(Axis axis, double angle);

// Row-convention point transform: each row of `points` (n x 3) is a point,
// result row i = points.row(i) * r.
Eigen::MatrixX3d rotate_points(const Eigen::MatrixX3d& points, const Rotation& r);

// Geodesic distance on SO(3) in radians: the angle of r1 r2^T, evaluated as
// atan2(sine from the skew part, cosine from the trace) so it stays accurate
// near 0 and pi. Range [0, pi]; symmetric and bi-invariant.
double geodesic_angle(const Rotation& r1, const Rotation& r2);

// Nearest rotation in Frobenius norm via SVD, with the determinant sign fix
// R = U diag(1,1,det(U V^T)) V^T. Throws DegenerateMatrix when the second
// singular value is ~0 (the projection is not unique).
Rotation project_to_so3(const Eigen::Matrix3d& m);

enum class MeanMethod { ProjectedArithmetic, Karcher };

// Mean of a nonempty list of rotations. ProjectedArithmetic projects the
// entrywise average; Karcher iterates tangent-space averaging (log/exp)
// from the first element until ||mean log|| < 1e-10, throwing NonConvergent
// after 100 iterations.
Rotation mean_rotation(const std::vector<Rotation>& rs, MeanMethod method);

// Hamilton-convention unit quaternion (w scalar part) <-> matrix.
// quat_to_rotation normalizes its input; rotation_to_quat returns one of
// the two equivalent signs.
Rotation quat_to_rotation(const Eigen::Quaterniond& q);
Eigen::Quaterniond rotation_to_quat(const Rotation& r);

Rotation euler_to_rotation(const EulerAngles& e, EulerOrder order = EulerOrder::XYZ);

// Inverse of euler_to_rotation(., XYZ). pitch in [-pi/2, pi/2]; at the
// gimbal singularity |pitch| = pi/2 the yaw is fixed to 0 and roll absorbs
// the free angle.
EulerAngles rotation_to_euler_xyz(const Rotation& r);

constexpr double kDegPerRad = 57.29577951308232;
inline double deg(double rad) { return rad * kDegPerRad; }
inline double rad(double degv) { return degv / kDegPerRad; }

// Matrix exponential/log restricted to SO(3): v is an axis-angle vector.
Rotation exp_so3(const Vec3& v);
Vec3 log_so3(const Rotation& r);

}  // namespace so3align
