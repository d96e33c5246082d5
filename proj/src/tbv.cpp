#include "so3align/tbv.hpp"

#include <cmath>

#include "so3align/errors.hpp"
#include "so3align/kernels.hpp"

namespace so3align {

TbvTriple tbvs_from_so3(const std::vector<Rotation>& rs) {
  if (rs.empty()) throw EmptySet("tbvs_from_so3: empty rotation set");
  TbvTriple t;
  t.x.resize(rs.size());
  t.y.resize(rs.size());
  t.z.resize(rs.size());
  kernels::extract_tbvs(rs, t.x, t.y, t.z);
  return t;
}

std::vector<Rotation> so3_from_tbvs(const TbvTriple& t) {
  if (t.x.size() != t.y.size() || t.x.size() != t.z.size()) {
    throw EmptySet("so3_from_tbvs: axis sets differ in length");
  }
  std::vector<Rotation> rs(t.x.size());
  for (std::size_t k = 0; k < rs.size(); ++k) {
    rs[k].row(0) = t.x[k].transpose();
    rs[k].row(1) = t.y[k].transpose();
    rs[k].row(2) = t.z[k].transpose();
  }
  return rs;
}

Vec3 mean_vector(const S2PointSet& s) {
  if (s.empty()) throw EmptySet("mean_vector: empty point set");
  Vec3 acc = Vec3::Zero();
  for (const auto& v : s) acc += v;
  return acc / static_cast<double>(s.size());
}

Vec3 mean_direction(const S2PointSet& s, double tau) {
  const Vec3 m = mean_vector(s);
  const double n = m.norm();
  if (n < tau) {
    throw DegenerateMean("mean direction undefined: |mean| = " + std::to_string(n) +
                         " < " + std::to_string(tau));
  }
  return m / n;
}

Rotation rotation_to_north(const Vec3& d) {
  static const Vec3 kNorth(0.0, 0.0, 1.0);
  const Vec3 axis = d.cross(kNorth);
  const double s = axis.norm();
  const double c = d.dot(kNorth);
  if (s < 1e-12) {
    // d is (anti)parallel to z. The antipodal case has no minimal rotation;
    // pick the 180-degree flip about x by convention.
    return c > 0.0 ? Rotation::Identity() : axis_rotation(Axis::X, M_PI);
  }
  return Eigen::AngleAxisd(std::atan2(s, c), axis / s).toRotationMatrix();
}

S2PointSet apply_rotation(const S2PointSet& s, const Rotation& r) {
  S2PointSet out(s.size());
  kernels::rotate_points(s, r, out);
  return out;
}

S2PointSet negate(const S2PointSet& s) {
  S2PointSet out(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) out[k] = -s[k];
  return out;
}

}  // namespace so3align
