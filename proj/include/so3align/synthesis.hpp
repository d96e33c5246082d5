#pragma once

#include <array>
#include <cstdint>
#include <utility>

#include "so3align/rotation.hpp"
#include "so3align/signed_permutation.hpp"

namespace so3align {

// Deterministic seed derivation: one master seed fans out into independent
// streams (per trial, per stage) without overlap. splitmix64-based.
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream);

enum class ScenarioKind {
  BoundedEuler,        // independent uniform Euler angles within per-axis ranges
  GaussianQuaternion,  // Euler angles drawn from normals around a mean pose
  PlantedPasi,         // BoundedEuler base meant to be relabeled+rotated afterwards
};

struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::BoundedEuler;
  int n = 2000;
  std::uint64_t seed = 0;
  // BoundedEuler / PlantedPasi: {lo, hi} in radians for roll, pitch, yaw.
  std::array<std::pair<double, double>, 3> euler_ranges{};
  // GaussianQuaternion:
  EulerAngles gaussian_mean{};
  double gaussian_std = rad(10.0);

  // The three stock benchmark scenarios. 1: wide asymmetric Euler boxes.
  // 2: the same boxes with non-integer half-degree endpoints. 3: normal
  // spread around a fixed mean attitude.
  static ScenarioSpec scenario1(int n, std::uint64_t seed);
  static ScenarioSpec scenario2(int n, std::uint64_t seed);
  static ScenarioSpec scenario3(int n, std::uint64_t seed);
  static ScenarioSpec stock(int which, int n, std::uint64_t seed);
};

// Measurement corruption: every element is right-composed with a small
// random rotation (axis uniform on the sphere, angle ~ N(0, noise_std)),
// then floor(outlier_fraction * n) elements, chosen without replacement,
// are replaced outright by uniform random rotations.
struct CorruptionSpec {
  double noise_std = 0.0;          // radians
  double outlier_fraction = 0.0;   // in [0, 1]
  std::uint64_t seed = 0;

  // Stock severity ladder, 1..7: (0,0), (0.01,0), then 0.01 rad noise with
  // outlier fractions 0.10, 0.25, 0.50, 0.75, 0.90.
  static CorruptionSpec level(int b, std::uint64_t seed);
};

RotationSet generate_scenario(const ScenarioSpec& spec);

RotationSet corrupt(const RotationSet& clean, const CorruptionSpec& spec);

// Ground-truth instance for recovery tests: every target element a becomes
// the source element l^T * a * r_gt. Optionally shuffles the output order so
// nothing can rely on index correspondence.
RotationSet plant_global(const RotationSet& targets, const Rotation& r_gt,
                         const SignedPermutation& l, bool shuffle = false,
                         std::uint64_t seed = 0);

// Haar-uniform rotations via normalized 4D Gaussian quaternions.
std::vector<Rotation> random_rotations(int count, std::uint64_t seed);

// Uniformly random proper signed permutation (one of the 24).
SignedPermutation random_proper_permutation(std::uint64_t seed);

}  // namespace so3align
