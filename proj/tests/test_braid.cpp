#include <cmath>
#include <limits>
#include <random>

#include "braidrec/braid.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace braidrec;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

BraidParams reference_params() {
  BraidParams p;
  p.amplitude = 20.0;
  p.depth_amplitude = 10.0;
  p.frequency = 1.0;
  p.t_step = 0.05;
  p.t_scale = 1.0;
  p.n_points = 200;
  p.n_bunches = 3;
  p.radius = 7.0;
  return p;
}

}  // namespace

TEST_CASE("braid params validation") {
  BraidParams p = reference_params();
  CHECK_NOTHROW(p.validate());

  SUBCASE("zero amplitude is legal") {
    p.amplitude = 0.0;
    CHECK_NOTHROW(p.validate());
  }
  SUBCASE("negative amplitude") {
    p.amplitude = -1.0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
  }
  SUBCASE("frequency must be positive") {
    p.frequency = 0.0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
  }
  SUBCASE("t_step must be positive") {
    p.t_step = 0.0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
  }
  SUBCASE("t_scale must be positive") {
    p.t_scale = -0.5;
    CHECK_THROWS_AS(p.validate(), ValidationError);
  }
  SUBCASE("n_points lower bound") {
    p.n_points = 1;
    CHECK_THROWS_AS(p.validate(), ValidationError);
  }
  SUBCASE("n_bunches lower bound") {
    p.n_bunches = 1;
    CHECK_THROWS_AS(p.validate(), ValidationError);
  }
  SUBCASE("radius must be positive") {
    p.radius = 0.0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
  }
  SUBCASE("non-finite depth amplitude") {
    p.depth_amplitude = std::nan("");
    CHECK_THROWS_AS(p.validate(), ValidationError);
  }
  SUBCASE("shift_x length must match n_points") {
    p.shift_x.assign(7, 0.0);
    CHECK_THROWS_AS(p.validate(), ValidationError);
  }
  SUBCASE("shift_y entries must be finite") {
    p.shift_y.assign(200, 0.0);
    p.shift_y[3] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(p.validate(), ValidationError);
  }
  SUBCASE("bunch noise length must match n_bunches") {
    p.bunch_noise = {0.0, 0.0};
    CHECK_THROWS_AS(p.validate(), ValidationError);
  }
  SUBCASE("bunch noise magnitude below 1") {
    p.bunch_noise = {0.0, 1.0, 0.0};
    CHECK_THROWS_AS(p.validate(), ValidationError);
  }
  SUBCASE("error code is invalid-params") {
    p.radius = -2.0;
    try {
      p.validate();
      FAIL("expected a throw");
    } catch (const ValidationError& e) {
      CHECK(e.code() == "invalid-params");
    }
  }
}

TEST_CASE("analytic mid-lines hit hand-computed values") {
  const auto lines = midlines_eq1(1.0, 10.0, {0.0, 0.5}, 3);
  REQUIRE(lines.size() == 3);
  REQUIRE(lines[0].size() == 2);

  // bunch 0 at t=0 sits at the origin
  CHECK(lines[0].points()[0].x == 0.0);
  CHECK(lines[0].points()[0].y == 0.0);
  CHECK(lines[0].points()[0].z == 0.0);

  // bunch 1 at t=0: x = sin(2*pi/3), z = 10*sin(4*pi/3)
  const Point3& p10 = lines[1].points()[0];
  CHECK(std::abs(p10.x - 0.86602540378443871) < 1e-14);
  CHECK(p10.y == 0.0);
  CHECK(std::abs(p10.z - -8.6602540378443837) < 1e-13);

  // bunch 2 at t=0: x = sin(4*pi/3), z = 10*sin(8*pi/3)
  const Point3& p20 = lines[2].points()[0];
  CHECK(std::abs(p20.x - -0.86602540378443871) < 1e-14);
  CHECK(std::abs(p20.z - 8.6602540378443837) < 1e-13);
}

TEST_CASE("mid-lines are 2*pi periodic in x and z") {
  const std::vector<double> base = {0.0, 1.0, 2.0};
  std::vector<double> shifted;
  for (double t : base) shifted.push_back(t + 2.0 * kPi);
  const auto l0 = midlines_eq1(5.0, 3.0, base, 4);
  const auto l1 = midlines_eq1(5.0, 3.0, shifted, 4);
  for (std::size_t i = 0; i < l0.size(); ++i) {
    for (std::size_t k = 0; k < l0[i].size(); ++k) {
      CHECK(std::abs(l0[i].points()[k].x - l1[i].points()[k].x) < 1e-9);
      CHECK(std::abs(l0[i].points()[k].z - l1[i].points()[k].z) < 1e-9);
    }
  }
}

TEST_CASE("mid-line argument validation") {
  CHECK_THROWS_AS(midlines_eq1(1.0, 1.0, {}, 3), ValidationError);
  CHECK_THROWS_AS(midlines_eq1(1.0, 1.0, {0.0, 0.0}, 3), ValidationError);
  CHECK_THROWS_AS(midlines_eq1(1.0, 1.0, {1.0, 0.5}, 3), ValidationError);
  CHECK_THROWS_AS(midlines_eq1(1.0, 1.0, {0.0, 1.0}, 1), ValidationError);
}

TEST_CASE("generated centerline coordinates match closed forms") {
  BraidParams p = reference_params();
  p.amplitude = 2.0;
  p.bunch_noise = {0.0, 0.0, 0.0};
  const SyntheticBraid braid = generate(p, 0);
  const auto& b0 = braid.centerlines()[0].points();

  // bunch 0: x_k = 2*sin(0.05*k), y_k = 0.05*k, z_k = 10*sin(0.1*k)
  CHECK(b0[0].x == 0.0);
  CHECK(b0[0].y == 0.0);
  CHECK(b0[0].z == 0.0);
  CHECK(std::abs(b0[1].x - 0.099958338541356662) < 1e-14);
  CHECK(b0[1].y == 0.05);
  CHECK(std::abs(b0[2].x - 0.19966683329365631) < 1e-14);
  CHECK(b0[2].y == 0.1);
  CHECK(std::abs(b0[1].z - 10.0 * std::sin(0.1)) < 1e-13);

  // bunch 1 at k=0 carries the 2*pi/3 phase
  const auto& b1 = braid.centerlines()[1].points();
  CHECK(std::abs(b1[0].x - 1.7320508075688774) < 1e-13);
}

TEST_CASE("per-point shifts move the centerline verbatim") {
  BraidParams p = reference_params();
  p.n_points = 8;
  p.bunch_noise = {0.0, 0.0, 0.0};
  p.shift_x.assign(8, 0.0);
  p.shift_y.assign(8, 0.0);
  for (int k = 0; k < 8; ++k) {
    p.shift_x[k] = 100.0 + k;
    p.shift_y[k] = 3.0 * k;
  }
  p.shift_z = -4.0;
  const SyntheticBraid braid = generate(p, 0);
  const auto& pts = braid.centerlines()[0].points();
  for (int k = 0; k < 8; ++k) {
    const double t = p.t_at(k);
    CHECK(pts[k].x == doctest::Approx(20.0 * std::sin(t) + 100.0 + k).epsilon(1e-14));
    CHECK(pts[k].y == 3.0 * k);
    CHECK(pts[k].z == doctest::Approx(10.0 * std::sin(2.0 * t) - 4.0).epsilon(1e-14));
  }
}

TEST_CASE("generation with zero shifts reduces to the analytic mid-lines") {
  BraidParams p = reference_params();
  p.bunch_noise = {0.0, 0.0, 0.0};
  const SyntheticBraid braid = generate(p, 0);

  std::vector<double> t_values;
  for (int k = 0; k < p.n_points; ++k) t_values.push_back(p.t_at(k));
  const auto analytic = midlines_eq1(p.amplitude, p.depth_amplitude, t_values, p.n_bunches);

  double max_diff = 0.0;
  for (int i = 0; i < p.n_bunches; ++i) {
    const auto& gen = braid.centerlines()[i].points();
    const auto& ref = analytic[i].points();
    REQUIRE(gen.size() == ref.size());
    for (std::size_t k = 0; k < gen.size(); ++k) {
      max_diff = std::max(max_diff, std::abs(gen[k].x - ref[k].x));
      max_diff = std::max(max_diff, std::abs(gen[k].y - ref[k].y));
      max_diff = std::max(max_diff, std::abs(gen[k].z - ref[k].z));
    }
  }
  CHECK(max_diff <= 1e-12);
}

TEST_CASE("zero bunch noise gives the nominal radius everywhere") {
  BraidParams p = reference_params();
  p.bunch_noise = {0.0, 0.0, 0.0};
  const SyntheticBraid braid = generate(p, 7);
  for (const auto& profile : braid.radius_profile()) {
    REQUIRE(profile.size() == static_cast<std::size_t>(p.n_points));
    for (double r : profile) CHECK(r == 7.0);
  }
}

TEST_CASE("drawn bunch noise stays inside [-0.1, 0.1]") {
  BraidParams p = reference_params();
  for (std::uint64_t seed : {0ULL, 1ULL, 42ULL, 1234567ULL}) {
    const SyntheticBraid braid = generate(p, seed);
    const auto& noise = braid.params().bunch_noise;
    REQUIRE(noise.size() == 3);
    for (double n : noise) {
      CHECK(n >= -0.1);
      CHECK(n <= 0.1);
    }
  }
}

TEST_CASE("generation is deterministic in the seed") {
  BraidParams p = reference_params();
  const SyntheticBraid a = generate(p, 42);
  const SyntheticBraid b = generate(p, 42);

  CHECK(a.params().bunch_noise == b.params().bunch_noise);
  REQUIRE(a.tube_strands().size() == b.tube_strands().size());
  for (std::size_t s = 0; s < a.tube_strands().size(); ++s) {
    const auto& sa = a.tube_strands().strands()[s];
    const auto& sb = b.tube_strands().strands()[s];
    CHECK(sa.id() == sb.id());
    REQUIRE(sa.size() == sb.size());
    for (std::size_t k = 0; k < sa.size(); ++k) {
      CHECK(sa.points()[k] == sb.points()[k]);
    }
  }

  const SyntheticBraid c = generate(p, 43);
  CHECK(a.params().bunch_noise != c.params().bunch_noise);
}

TEST_CASE("tube strands stay on the bunch surface") {
  BraidParams p = reference_params();
  const SyntheticBraid braid = generate(p, 42);
  REQUIRE(braid.tube_strands().size() == 3 * (kTubeSurfaceStrands + 1));

  for (const auto& s : braid.tube_strands().strands()) {
    const auto it = braid.bunch_of().find(s.id());
    REQUIRE(it != braid.bunch_of().end());
    const int bunch = it->second;
    const auto& center = braid.centerlines()[bunch].points();
    const auto& profile = braid.radius_profile()[bunch];
    const bool is_center_copy = s.id().ends_with("_c");
    for (std::size_t k = 0; k < s.size(); ++k) {
      const double d = distance(s.points()[k], center[k]);
      if (is_center_copy) {
        CHECK(d == 0.0);
      } else {
        CHECK(std::abs(d - profile[k]) <= 1e-9);
      }
      // the declared containment guarantee, via the public distance query
      CHECK(centerline_distance(s.points()[k], braid, bunch).first <= profile[k] + 1e-6);
    }
  }
}

TEST_CASE("centerline distance agrees with a brute-force scan") {
  BraidParams p = reference_params();
  const SyntheticBraid braid = generate(p, 9);
  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> ux(-30.0, 30.0);
  std::uniform_real_distribution<double> uy(-2.0, 12.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Point3 q(ux(rng), uy(rng), ux(rng) * 0.5);
    for (int bunch = 0; bunch < braid.n_bunches(); ++bunch) {
      const auto fast = centerline_distance(q, braid, bunch);
      const auto& pts = braid.centerlines()[bunch].points();
      double best = distance(q, pts[0]);
      std::size_t best_idx = 0;
      for (std::size_t k = 1; k < pts.size(); ++k) {
        const double d = distance(q, pts[k]);
        if (d < best) {
          best = d;
          best_idx = k;
        }
      }
      CHECK(fast.first == best);
      CHECK(fast.second == best_idx);
    }
  }
  CHECK_THROWS_AS(centerline_distance(Point3(0, 0, 0), braid, -1), ValidationError);
  CHECK_THROWS_AS(centerline_distance(Point3(0, 0, 0), braid, 3), ValidationError);
}

TEST_CASE("transported frames are orthonormal and stable") {
  BraidParams p = reference_params();
  p.bunch_noise = {0.0, 0.0, 0.0};
  const SyntheticBraid braid = generate(p, 0);
  const auto frames = transport_frames(braid.centerlines()[0].points());
  REQUIRE(frames.size() == static_cast<std::size_t>(p.n_points));
  for (std::size_t k = 0; k < frames.size(); ++k) {
    const Frame& f = frames[k];
    CHECK(std::abs(norm(f.tangent) - 1.0) < 1e-12);
    CHECK(std::abs(norm(f.normal) - 1.0) < 1e-12);
    CHECK(std::abs(norm(f.binormal) - 1.0) < 1e-12);
    CHECK(std::abs(dot(f.tangent, f.normal)) < 1e-12);
    CHECK(std::abs(dot(f.tangent, f.binormal)) < 1e-12);
    CHECK(std::abs(dot(f.normal, f.binormal)) < 1e-12);
    if (k > 0) CHECK(dot(frames[k].normal, frames[k - 1].normal) > 0.0);  // no flips
  }
}

TEST_CASE("frames along a straight line are constant") {
  std::vector<Point3> line;
  for (int k = 0; k < 10; ++k) line.emplace_back(0.0, static_cast<double>(k), 0.0);
  const auto frames = transport_frames(line);
  for (const auto& f : frames) {
    CHECK(distance(f.tangent, frames[0].tangent) < 1e-15);
    CHECK(distance(f.normal, frames[0].normal) < 1e-15);
    CHECK(distance(f.binormal, frames[0].binormal) < 1e-15);
  }
}

TEST_CASE("frames reject a centerline that doubles back on itself") {
  std::vector<Point3> bad = {{0, 0, 0}, {0, 1, 0}, {0, 0, 0}};
  CHECK_THROWS_AS(transport_frames(bad), ValidationError);
}
