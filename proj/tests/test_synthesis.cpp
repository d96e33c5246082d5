#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "so3align/errors.hpp"
#include "so3align/synthesis.hpp"

using namespace so3align;

namespace {

bool sets_equal(const RotationSet& a, const RotationSet& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (!(a.items[k].array() == b.items[k].array()).all()) return false;
  }
  return a.timestamps == b.timestamps;
}

}  // namespace

TEST_CASE("generation is deterministic in the seed, bit for bit") {
  for (int which : {1, 2, 3}) {
    const ScenarioSpec spec = ScenarioSpec::stock(which, 200, 42);
    CHECK(sets_equal(generate_scenario(spec), generate_scenario(spec)));
  }
  ScenarioSpec other = ScenarioSpec::scenario1(200, 43);
  CHECK_FALSE(sets_equal(generate_scenario(ScenarioSpec::scenario1(200, 42)),
                         generate_scenario(other)));
}

TEST_CASE("collapsed euler ranges produce n copies of one rotation") {
  ScenarioSpec spec;
  spec.kind = ScenarioKind::BoundedEuler;
  spec.n = 25;
  spec.seed = 1;
  spec.euler_ranges = {{{0.2, 0.2}, {-0.1, -0.1}, {0.5, 0.5}}};
  const RotationSet s = generate_scenario(spec);
  const Rotation expect = euler_to_rotation(EulerAngles{0.2, -0.1, 0.5});
  REQUIRE(s.size() == 25);
  for (const auto& r : s.items) {
    CHECK((r.array() == expect.array()).all());
  }
}

TEST_CASE("bounded euler samples stay inside their boxes") {
  const ScenarioSpec spec = ScenarioSpec::scenario1(2000, 44);
  const RotationSet s = generate_scenario(spec);
  for (const auto& r : s.items) {
    CHECK(is_rotation(r, 1e-9));
    const EulerAngles e = rotation_to_euler_xyz(r);
    CHECK(e.roll >= rad(-40.0) - 1e-9);
    CHECK(e.roll <= rad(10.0) + 1e-9);
    CHECK(e.pitch >= rad(-20.0) - 1e-9);
    CHECK(e.pitch <= rad(20.0) + 1e-9);
    CHECK(e.yaw >= rad(-10.0) - 1e-9);
    CHECK(e.yaw <= rad(50.0) + 1e-9);
  }
}

TEST_CASE("gaussian scenario concentrates around its mean attitude") {
  const ScenarioSpec spec = ScenarioSpec::scenario3(2000, 45);
  const RotationSet s = generate_scenario(spec);
  const Rotation mean_gt =
      euler_to_rotation(EulerAngles{rad(30.0), rad(10.0), rad(15.5)});
  const Rotation mean_est = mean_rotation(s.items, MeanMethod::ProjectedArithmetic);
  CHECK(deg(geodesic_angle(mean_gt, mean_est)) < 2.0);
}

TEST_CASE("corruption level 1 is the identity transformation") {
  const RotationSet s = generate_scenario(ScenarioSpec::scenario1(100, 46));
  CHECK(sets_equal(corrupt(s, CorruptionSpec::level(1, 47)), s));
}

TEST_CASE("noise-only corruption perturbs without replacing") {
  const RotationSet s = generate_scenario(ScenarioSpec::scenario1(500, 48));
  const RotationSet c = corrupt(s, CorruptionSpec::level(2, 49));
  REQUIRE(c.size() == s.size());
  int within3 = 0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    CHECK(is_rotation(c.items[k], 1e-9));
    const double a = geodesic_angle(s.items[k], c.items[k]);
    if (a <= 3.0 * 0.01) ++within3;
  }
  // |N(0, 0.01)| stays under 3 sigma with probability 99.7%.
  CHECK(within3 >= static_cast<int>(0.99 * s.size()));
}

TEST_CASE("outlier corruption replaces exactly the floor fraction") {
  const RotationSet s = generate_scenario(ScenarioSpec::scenario1(1000, 50));
  const RotationSet c5 = corrupt(s, CorruptionSpec::level(5, 51));
  // Replaced items are uniform rotations, far from the original with
  // overwhelming probability; noise moves inliers by ~0.01 rad.
  int far = 0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (geodesic_angle(s.items[k], c5.items[k]) > 0.06) ++far;
  }
  CHECK(far == 500);

  const RotationSet c7 = corrupt(s, CorruptionSpec::level(7, 52));
  far = 0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (geodesic_angle(s.items[k], c7.items[k]) > 0.06) ++far;
  }
  CHECK(far == 900);
}

TEST_CASE("corruption is deterministic and setting-sensitive") {
  const RotationSet s = generate_scenario(ScenarioSpec::scenario1(200, 53));
  const CorruptionSpec spec = CorruptionSpec::level(4, 54);
  CHECK(sets_equal(corrupt(s, spec), corrupt(s, spec)));
  CHECK_FALSE(sets_equal(corrupt(s, spec), corrupt(s, CorruptionSpec::level(4, 55))));
}

TEST_CASE("corruption level table") {
  CHECK(CorruptionSpec::level(1, 0).noise_std == 0.0);
  CHECK(CorruptionSpec::level(1, 0).outlier_fraction == 0.0);
  CHECK(CorruptionSpec::level(2, 0).noise_std == 0.01);
  CHECK(CorruptionSpec::level(2, 0).outlier_fraction == 0.0);
  CHECK(CorruptionSpec::level(3, 0).outlier_fraction == 0.10);
  CHECK(CorruptionSpec::level(4, 0).outlier_fraction == 0.25);
  CHECK(CorruptionSpec::level(5, 0).outlier_fraction == 0.50);
  CHECK(CorruptionSpec::level(6, 0).outlier_fraction == 0.75);
  CHECK(CorruptionSpec::level(7, 0).outlier_fraction == 0.90);
  CHECK_THROWS_AS(CorruptionSpec::level(8, 0), Error);
}

TEST_CASE("planting with identity mapping and identity rotation is a no-op") {
  const RotationSet s = generate_scenario(ScenarioSpec::scenario1(50, 56));
  const RotationSet planted =
      plant_global(s, Rotation::Identity(), SignedPermutation::identity());
  REQUIRE(planted.size() == s.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    CHECK(geodesic_angle(planted.items[k], s.items[k]) < 1e-15);
  }
}

TEST_CASE("planting produces rotations and shuffling only reorders") {
  const RotationSet s = generate_scenario(ScenarioSpec::scenario1(100, 57));
  const Rotation r_gt = random_rotations(1, 58)[0];
  const SignedPermutation l = random_proper_permutation(59);
  const RotationSet plain = plant_global(s, r_gt, l, false);
  const RotationSet shuffled = plant_global(s, r_gt, l, true, 60);
  REQUIRE(plain.size() == shuffled.size());
  for (const auto& r : plain.items) CHECK(is_rotation(r, 1e-9));

  // Same multiset of elements.
  auto key = [](const Rotation& r) {
    return std::make_tuple(r(0, 0), r(0, 1), r(0, 2), r(1, 0), r(1, 1), r(1, 2), r(2, 0),
                           r(2, 1), r(2, 2));
  };
  std::vector<decltype(key(plain.items[0]))> ka, kb;
  for (const auto& r : plain.items) ka.push_back(key(r));
  for (const auto& r : shuffled.items) kb.push_back(key(r));
  std::sort(ka.begin(), ka.end());
  std::sort(kb.begin(), kb.end());
  CHECK(ka == kb);
}

TEST_CASE("uniform rotations look uniform and are reproducible") {
  const auto a = random_rotations(10000, 61);
  const auto b = random_rotations(10000, 61);
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK((a[k].array() == b[k].array()).all());
  }
  // Haar expectation of the trace is 0; the empirical mean concentrates.
  double tr = 0.0;
  for (const auto& r : a) tr += r.trace();
  CHECK(std::abs(tr / static_cast<double>(a.size())) < 0.05);

  const auto c = random_rotations(100, 62);
  for (std::size_t i = 0; i < c.size(); ++i) {
    CHECK(is_rotation(c[i], 1e-9));
    for (std::size_t j = i + 1; j < c.size(); ++j) {
      CHECK(geodesic_angle(c[i], c[j]) > 1e-6);  // all distinct
    }
  }
}

TEST_CASE("seed splitting separates streams") {
  CHECK(split_seed(1, 1) != split_seed(1, 2));
  CHECK(split_seed(1, 1) != split_seed(2, 1));
  CHECK(split_seed(1, 1) == split_seed(1, 1));
}

TEST_CASE("random proper permutations are proper and cover the set") {
  std::set<std::string> seen;
  for (int t = 0; t < 400; ++t) {
    const SignedPermutation p = random_proper_permutation(1000 + t);
    CHECK(p.proper());
    seen.insert(p.mapping_string());
  }
  CHECK(seen.size() == 24);  // 400 draws miss one of 24 with prob ~1e-7
}

TEST_CASE("invalid specs are rejected") {
  ScenarioSpec bad;
  bad.n = 0;
  CHECK_THROWS_AS(generate_scenario(bad), Error);
  ScenarioSpec flipped = ScenarioSpec::scenario1(10, 0);
  flipped.euler_ranges[0] = {0.5, -0.5};
  CHECK_THROWS_AS(generate_scenario(flipped), Error);
  CorruptionSpec neg;
  neg.noise_std = -1.0;
  CHECK_THROWS_AS(corrupt(RotationSet{}, neg), Error);
  CorruptionSpec frac;
  frac.outlier_fraction = 1.5;
  CHECK_THROWS_AS(corrupt(RotationSet{}, frac), Error);
}
