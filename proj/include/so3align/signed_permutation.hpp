#pragma once

#include <array>
#include <string>
#include <vector>

#include "so3align/tbv.hpp"

namespace so3align {

// Signed permutation matrix L: exactly one nonzero entry (+1 or -1) per row
// and column. Row i encodes which source axis pi[i] plays the role of target
// axis i, and with which sign: L(i, pi[i]) = sign[i]. Proper (det +1)
// signed permutations are exactly the 24 axis relabelings reachable by a
// rigid reorientation of the coordinate frame.
struct SignedPermutation {
  Eigen::Matrix3i l = Eigen::Matrix3i::Identity();
  std::array<int, 3> pi = {0, 1, 2};
  std::array<int, 3> sign = {1, 1, 1};

  Eigen::Matrix3d matrix() const { return l.cast<double>(); }
  int det() const;
  bool proper() const { return det() == 1; }
  bool operator==(const SignedPermutation& o) const { return l == o.l; }

  // "Ax->-By, Ay->+Bx, Az->+Bz" style round-trippable description.
  std::string mapping_string() const;

  static SignedPermutation identity() { return SignedPermutation{}; }
  // Throws InvalidMapping unless m is a signed permutation matrix.
  static SignedPermutation from_matrix(const Eigen::Matrix3i& m);
  // Inverse of mapping_string(); whitespace-insensitive, '+' optional.
  static SignedPermutation from_mapping(const std::string& text);
};

// All signed permutations in a canonical deterministic order: permutations
// in lexicographic order of (pi[0], pi[1], pi[2]), signs nested inside in
// lexicographic order with +1 before -1. The identity is element 0 of both
// the proper-only (24) and the full (48) enumeration.
std::vector<SignedPermutation> enumerate_signed_permutations(bool proper_only = true);

// Axis relabeling on a TBV triple: output axis i holds sign[i] * t[pi[i]],
// point-wise. Matches stacking the sets as matrix rows and multiplying by L.
TbvTriple apply_to_triple(const SignedPermutation& l, const TbvTriple& t);

}  // namespace so3align
