#pragma once

#include <vector>

#include "so3align/rotation.hpp"

namespace so3align {

// Unit vectors on the sphere. Order is preserved by every operation that
// maps point sets to point sets, so index k always refers to rotation k of
// the set the points came from.
using S2PointSet = std::vector<Vec3>;

// The three spherical point sets extracted from one rotation set: entry k of
// triple.x is row 0 of rotation k (transposed), i.e. where that rotation's
// source x-axis points when expressed in the target frame, and likewise for
// y and z.
struct TbvTriple {
  S2PointSet x;
  S2PointSet y;
  S2PointSet z;

  const S2PointSet& operator[](int axis) const { return axis == 0 ? x : (axis == 1 ? y : z); }
  S2PointSet& operator[](int axis) { return axis == 0 ? x : (axis == 1 ? y : z); }
};

// Decompose a nonempty rotation set into its three axis point sets.
TbvTriple tbvs_from_so3(const std::vector<Rotation>& rs);

// Reassemble: rotation k has rows x[k]^T, y[k]^T, z[k]^T. Exact inverse of
// tbvs_from_so3 (bit-for-bit); no orthonormality check is performed.
std::vector<Rotation> so3_from_tbvs(const TbvTriple& t);

// Unnormalized arithmetic mean of the points.
Vec3 mean_vector(const S2PointSet& s);

// Normalized arithmetic mean direction. Throws DegenerateMean when the mean
// has norm < tau (near-uniform or antipodally balanced sets).
Vec3 mean_direction(const S2PointSet& s, double tau = 1e-6);

// Minimal rotation taking unit vector d to +z (rotation about d x z). For
// d = -z, where the minimal rotation is not unique, returns the 180-degree
// rotation about x.
Rotation rotation_to_north(const Vec3& d);

// out[k] = r * s[k].
S2PointSet apply_rotation(const S2PointSet& s, const Rotation& r);

S2PointSet negate(const S2PointSet& s);

}  // namespace so3align
