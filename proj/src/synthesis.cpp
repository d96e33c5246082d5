#include "so3align/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "so3align/errors.hpp"

namespace so3align {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rotation haar_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  Eigen::Quaterniond q;
  do {
    q = Eigen::Quaterniond(n01(rng), n01(rng), n01(rng), n01(rng));
  } while (q.norm() < 1e-12);
  return q.normalized().toRotationMatrix();
}

Vec3 uniform_sphere(std::mt19937_64& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  Vec3 v;
  do {
    v = Vec3(n01(rng), n01(rng), n01(rng));
  } while (v.norm() < 1e-12);
  return v.normalized();
}

}  // namespace

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

ScenarioSpec ScenarioSpec::scenario1(int n, std::uint64_t seed) {
  ScenarioSpec s;
  s.kind = ScenarioKind::BoundedEuler;
  s.n = n;
  s.seed = seed;
  s.euler_ranges = {{{rad(-40.0), rad(10.0)}, {rad(-20.0), rad(20.0)}, {rad(-10.0), rad(50.0)}}};
  return s;
}

ScenarioSpec ScenarioSpec::scenario2(int n, std::uint64_t seed) {
  ScenarioSpec s = scenario1(n, seed);
  s.euler_ranges = {{{rad(-40.5), rad(10.5)}, {rad(-20.5), rad(20.5)}, {rad(-10.5), rad(50.5)}}};
  return s;
}

ScenarioSpec ScenarioSpec::scenario3(int n, std::uint64_t seed) {
  ScenarioSpec s;
  s.kind = ScenarioKind::GaussianQuaternion;
  s.n = n;
  s.seed = seed;
  s.gaussian_mean = EulerAngles{rad(30.0), rad(10.0), rad(15.5)};
  s.gaussian_std = rad(10.0);
  return s;
}

ScenarioSpec ScenarioSpec::stock(int which, int n, std::uint64_t seed) {
  switch (which) {
    case 1: return scenario1(n, seed);
    case 2: return scenario2(n, seed);
    case 3: return scenario3(n, seed);
    default: throw Error("InvalidConfig", "stock scenario must be 1, 2 or 3");
  }
}

CorruptionSpec CorruptionSpec::level(int b, std::uint64_t seed) {
  CorruptionSpec c;
  c.seed = seed;
  switch (b) {
    case 1: c.noise_std = 0.0;  c.outlier_fraction = 0.0;  break;
    case 2: c.noise_std = 0.01; c.outlier_fraction = 0.0;  break;
    case 3: c.noise_std = 0.01; c.outlier_fraction = 0.10; break;
    case 4: c.noise_std = 0.01; c.outlier_fraction = 0.25; break;
    case 5: c.noise_std = 0.01; c.outlier_fraction = 0.50; break;
    case 6: c.noise_std = 0.01; c.outlier_fraction = 0.75; break;
    case 7: c.noise_std = 0.01; c.outlier_fraction = 0.90; break;
    default: throw Error("InvalidConfig", "corruption level must be in 1..7");
  }
  return c;
}

RotationSet generate_scenario(const ScenarioSpec& spec) {
  if (spec.n < 1) throw Error("InvalidConfig", "scenario needs n >= 1");
  std::mt19937_64 rng(split_seed(spec.seed, 1));
  RotationSet out;
  out.items.reserve(spec.n);

  if (spec.kind == ScenarioKind::GaussianQuaternion) {
    std::normal_distribution<double> n01(0.0, 1.0);
    for (int i = 0; i < spec.n; ++i) {
      EulerAngles e;
      e.roll = spec.gaussian_mean.roll + spec.gaussian_std * n01(rng);
      e.pitch = spec.gaussian_mean.pitch + spec.gaussian_std * n01(rng);
      e.yaw = spec.gaussian_mean.yaw + spec.gaussian_std * n01(rng);
      out.items.push_back(euler_to_rotation(e));
    }
    return out;
  }

  for (const auto& [lo, hi] : spec.euler_ranges) {
    if (lo > hi) throw Error("InvalidConfig", "euler range with lo > hi");
  }
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int i = 0; i < spec.n; ++i) {
    EulerAngles e;
    // lo + u*(hi-lo) keeps collapsed ranges exact (lo == hi gives lo).
    e.roll = spec.euler_ranges[0].first +
             u01(rng) * (spec.euler_ranges[0].second - spec.euler_ranges[0].first);
    e.pitch = spec.euler_ranges[1].first +
              u01(rng) * (spec.euler_ranges[1].second - spec.euler_ranges[1].first);
    e.yaw = spec.euler_ranges[2].first +
            u01(rng) * (spec.euler_ranges[2].second - spec.euler_ranges[2].first);
    out.items.push_back(euler_to_rotation(e));
  }
  return out;
}

RotationSet corrupt(const RotationSet& clean, const CorruptionSpec& spec) {
  if (spec.outlier_fraction < 0.0 || spec.outlier_fraction > 1.0) {
    throw Error("InvalidConfig", "outlier_fraction must be in [0, 1]");
  }
  if (spec.noise_std < 0.0) throw Error("InvalidConfig", "noise_std must be >= 0");

  RotationSet out = clean;
  const std::size_t n = out.size();
  if (n == 0) return out;

  if (spec.noise_std > 0.0) {
    std::mt19937_64 rng(split_seed(spec.seed, 2));
    std::normal_distribution<double> angle_dist(0.0, spec.noise_std);
    for (auto& r : out.items) {
      const Vec3 axis = uniform_sphere(rng);
      r = r * Eigen::AngleAxisd(angle_dist(rng), axis).toRotationMatrix();
    }
  }

  const std::size_t n_out = static_cast<std::size_t>(spec.outlier_fraction * static_cast<double>(n));
  if (n_out > 0) {
    std::mt19937_64 rng(split_seed(spec.seed, 3));
    // Partial Fisher-Yates: first n_out entries of a shuffled index list.
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < n_out; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, n - 1);
      std::swap(idx[i], idx[pick(rng)]);
    }
    for (std::size_t i = 0; i < n_out; ++i) {
      out.items[idx[i]] = haar_rotation(rng);
    }
  }
  return out;
}

RotationSet plant_global(const RotationSet& targets, const Rotation& r_gt,
                         const SignedPermutation& l, bool shuffle, std::uint64_t seed) {
  RotationSet out;
  out.items.reserve(targets.size());
  const Eigen::Matrix3d lt = l.matrix().transpose();
  for (const auto& a : targets.items) {
    out.items.push_back(lt * a * r_gt);
  }
  out.timestamps = targets.timestamps;
  if (shuffle) {
    std::mt19937_64 rng(split_seed(seed, 4));
    // Keep (item, timestamp) rows together if timestamps exist.
    std::vector<std::size_t> idx(out.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::shuffle(idx.begin(), idx.end(), rng);
    RotationSet shuffled;
    shuffled.items.reserve(out.size());
    if (out.has_timestamps()) shuffled.timestamps.reserve(out.size());
    for (std::size_t k : idx) {
      shuffled.items.push_back(out.items[k]);
      if (out.has_timestamps()) shuffled.timestamps.push_back(out.timestamps[k]);
    }
    return shuffled;
  }
  return out;
}

std::vector<Rotation> random_rotations(int count, std::uint64_t seed) {
  if (count < 0) throw Error("InvalidConfig", "random_rotations needs count >= 0");
  std::mt19937_64 rng(split_seed(seed, 5));
  std::vector<Rotation> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.push_back(haar_rotation(rng));
  return out;
}

SignedPermutation random_proper_permutation(std::uint64_t seed) {
  const auto all = enumerate_signed_permutations(true);
  std::mt19937_64 rng(split_seed(seed, 6));
  std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
  return all[pick(rng)];
}

}  // namespace so3align
