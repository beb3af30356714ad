#include <cmath>
#include <vector>

#include "braidrec/braid.hpp"
#include "braidrec/raster.hpp"
#include "doctest.h"

using namespace braidrec;

namespace {

// Direct per-pixel evaluation of the disc union, mirroring the splat math.
GrayImage brute_raster(const std::vector<Point3>& pts, const std::vector<double>& radii,
                       const ProjectionSpec& spec, double softness) {
  std::vector<double> img(static_cast<std::size_t>(spec.width) * spec.height, 0.0);
  for (int r = 0; r < spec.height; ++r) {
    for (int c = 0; c < spec.width; ++c) {
      double& px = img[static_cast<std::size_t>(r) * spec.width + c];
      for (std::size_t i = 0; i < pts.size(); ++i) {
        const double dx = c - pts[i].x;
        const double dy = r - pts[i].y;
        const double d = std::sqrt(dx * dx + dy * dy);
        const double reach = radii[i] + softness;
        double v = 0.0;
        if (d <= radii[i]) {
          v = 1.0;
        } else if (softness > 0.0 && d < reach) {
          v = (reach - d) / softness;
        }
        if (v > px) px = v;
      }
    }
  }
  return GrayImage(spec.width, spec.height, std::move(img));
}

std::vector<Point3> all_points(const StrandSet& set) {
  std::vector<Point3> pts;
  for (const auto& s : set.strands()) {
    pts.insert(pts.end(), s.points().begin(), s.points().end());
  }
  return pts;
}

// Straight vertical tube: every bunch collapses onto the line x = x0.
SyntheticBraid straight_tube(double x0, int n_points, double radius) {
  BraidParams p;
  p.amplitude = 0.0;
  p.depth_amplitude = 0.0;
  p.frequency = 1.0;
  p.t_step = 1.0;
  p.t_scale = 1.0;
  p.n_points = n_points;
  p.n_bunches = 2;
  p.radius = radius;
  p.shift_z = 0.0;
  p.shift_x.assign(n_points, x0);
  p.bunch_noise = {0.0, 0.0};
  return generate(p, 0);
}

}  // namespace

TEST_CASE("hard disc rasterization matches per-pixel evaluation") {
  const ProjectionSpec spec{40, 40};
  std::vector<Strand> strands;
  strands.emplace_back("a", std::vector<Point3>{{10.0, 10.0, 0.0}, {10.0, 30.0, 5.0}});
  strands.emplace_back("b", std::vector<Point3>{{25.5, 14.25, 0.0}, {30.0, 20.0, -3.0}});
  const StrandSet set(std::move(strands));
  const std::vector<double> radii = {3.0, 4.0, 2.5, 6.0};

  for (double softness : {0.0, 2.0}) {
    const GrayImage fast = rasterize_tube(set, radii, spec, softness);
    const GrayImage slow = brute_raster(all_points(set), radii, spec, softness);
    REQUIRE(fast.pixels().size() == slow.pixels().size());
    for (std::size_t i = 0; i < fast.pixels().size(); ++i) {
      CHECK(fast.pixels()[i] == slow.pixels()[i]);
    }
  }
}

TEST_CASE("rasterizing nothing yields a black image") {
  const ProjectionSpec spec{16, 8};
  const GrayImage img = rasterize_tube(StrandSet(), {}, spec, 1.0);
  CHECK(img.width() == 16);
  CHECK(img.height() == 8);
  for (double v : img.pixels()) CHECK(v == 0.0);
}

TEST_CASE("raster values stay in range and overlaps take the max") {
  const ProjectionSpec spec{32, 32};
  std::vector<Strand> strands;
  strands.emplace_back("s", std::vector<Point3>{{15.0, 15.0, 0.0}, {17.0, 15.0, 0.0}});
  const StrandSet set(std::move(strands));

  const std::vector<double> r55 = {5.0, 5.0};
  const GrayImage both = rasterize_tube(set, r55, spec, 3.0);
  for (double v : both.pixels()) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
  // either disc alone can only lower the image
  std::vector<Strand> left_only;
  left_only.emplace_back("s", std::vector<Point3>{{15.0, 15.0, 0.0}, {15.0, 115.0, 0.0}});
  const GrayImage left = rasterize_tube(StrandSet(std::move(left_only)), r55, spec, 3.0);
  for (std::size_t i = 0; i < both.pixels().size(); ++i) {
    CHECK(both.pixels()[i] >= left.pixels()[i]);
  }
}

TEST_CASE("raster grows monotonically with the radius") {
  const ProjectionSpec spec{32, 32};
  std::vector<Strand> strands;
  strands.emplace_back("s", std::vector<Point3>{{16.0, 12.0, 0.0}, {16.0, 20.0, 0.0}});
  const StrandSet set(std::move(strands));
  const std::vector<double> r2 = {2.0, 2.0};
  const std::vector<double> r3 = {3.0, 3.0};
  const GrayImage small = rasterize_tube(set, r2, spec, 0.0);
  const GrayImage big = rasterize_tube(set, r3, spec, 0.0);
  for (std::size_t i = 0; i < small.pixels().size(); ++i) {
    CHECK(big.pixels()[i] >= small.pixels()[i]);
  }
}

TEST_CASE("radius count must match the point count") {
  const ProjectionSpec spec{8, 8};
  std::vector<Strand> strands;
  strands.emplace_back("s", std::vector<Point3>{{1.0, 1.0, 0.0}, {2.0, 2.0, 0.0}});
  const StrandSet set(std::move(strands));
  const std::vector<double> one = {1.0};
  const std::vector<double> two = {1.0, 1.0};
  CHECK_THROWS_AS(rasterize_tube(set, one, spec, 0.0), ValidationError);
  CHECK_THROWS_AS(rasterize_tube(set, two, spec, -0.5), ValidationError);
}

TEST_CASE("synthetic edge band hugs a straight tube outline") {
  // radius 7 tube on x=16: silhouette covers |x-16| <= 7, the inner erosion
  // at 7/1.4 = 5 leaves a two-pixel band per side.
  const SyntheticBraid braid = straight_tube(16.0, 40, 7.0);
  const ProjectionSpec spec{32, 40};
  const GrayImage band = edge_image_synthetic(braid, spec, 0.0);
  for (int r = 0; r < spec.height; ++r) {
    for (int c = 0; c < spec.width; ++c) {
      const double expect =
          (c == 9 || c == 10 || c == 22 || c == 23) ? 1.0 : 0.0;
      CHECK(band.at(r, c) == expect);
    }
  }
}

TEST_CASE("edge band is zero deep inside the tube") {
  BraidParams p;
  p.amplitude = 20.0;
  p.depth_amplitude = 10.0;
  p.n_points = 200;
  p.n_bunches = 3;
  p.radius = 7.0;
  p.t_step = 0.05;
  p.t_scale = 51.2;
  p.frequency = 1.0 / 51.2 * 2.0;
  p.shift_x.assign(200, 64.0);
  p.bunch_noise = {0.0, 0.0, 0.0};
  const SyntheticBraid braid = generate(p, 0);
  const ProjectionSpec spec{128, 512};

  const GrayImage band = edge_image_synthetic(braid, spec, 0.0);
  // wherever the eroded interior is solid the band must vanish
  std::vector<double> radii;
  for (const auto& profile : braid.radius_profile()) {
    radii.insert(radii.end(), profile.begin(), profile.end());
  }
  for (double& r : radii) r /= 1.4;
  const GrayImage inner = rasterize_tube(StrandSet(braid.centerlines()), radii, spec, 0.0);
  int interior = 0;
  for (std::size_t i = 0; i < band.pixels().size(); ++i) {
    if (inner.pixels()[i] == 1.0) {
      CHECK(band.pixels()[i] == 0.0);
      ++interior;
    }
  }
  CHECK(interior > 1000);  // the check must actually cover the tube interior
}

TEST_CASE("canny of a constant image is empty") {
  const CannyConfig cfg;
  for (double level : {0.0, 0.37, 1.0}) {
    const GrayImage img(24, 24, std::vector<double>(24 * 24, level));
    const GrayImage edges = canny(img, cfg);
    for (double v : edges.pixels()) CHECK(v == 0.0);
  }
}

TEST_CASE("canny localizes a vertical step to one column per row") {
  const int n = 32;
  std::vector<double> px(n * n, 0.0);
  for (int r = 0; r < n; ++r) {
    for (int c = 16; c < n; ++c) px[static_cast<std::size_t>(r) * n + c] = 1.0;
  }
  const GrayImage img(n, n, std::move(px));
  const GrayImage edges = canny(img, CannyConfig{});

  for (int r = 0; r < n; ++r) {
    int hits = 0;
    for (int c = 0; c < n; ++c) {
      if (edges.at(r, c) != 0.0) {
        ++hits;
        CHECK(c == 15);  // last dark column before the step
      }
    }
    CHECK(hits == 1);
  }
}

TEST_CASE("canny output is strictly binary") {
  const int n = 32;
  std::vector<double> px(n * n, 0.0);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      px[static_cast<std::size_t>(r) * n + c] = (r >= 16) ? 0.8 : 0.1;
    }
  }
  const GrayImage edges = canny(GrayImage(n, n, std::move(px)), CannyConfig{});
  int ones = 0;
  for (double v : edges.pixels()) {
    CHECK((v == 0.0 || v == 1.0));
    if (v == 1.0) ++ones;
  }
  // horizontal step: one edge row, localized like the vertical case
  CHECK(ones == n);
  for (int c = 0; c < n; ++c) CHECK(edges.at(15, c) == 1.0);
}

TEST_CASE("canny config validation") {
  CannyConfig cfg;
  cfg.gaussian_sigma = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = CannyConfig{};
  cfg.low_threshold = 0.5;
  cfg.high_threshold = 0.4;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = CannyConfig{};
  cfg.high_threshold = 1.5;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
}

TEST_CASE("mask partition counts projected hits") {
  const ProjectionSpec spec{20, 20};
  // mask: left half bright
  std::vector<double> mpx(20 * 20, 0.0);
  for (int r = 0; r < 20; ++r) {
    for (int c = 0; c < 10; ++c) mpx[static_cast<std::size_t>(r) * 20 + c] = 1.0;
  }
  const GrayImage mask(20, 20, std::move(mpx));

  auto strand_across = [](const std::string& id, int bright_points) {
    // 10 points at y=5..14; the first `bright_points` land at x=4 (bright),
    // the rest at x=15 (dark)
    std::vector<Point3> pts;
    for (int k = 0; k < 10; ++k) {
      pts.emplace_back(k < bright_points ? 4.0 : 15.0, 5.0 + k, 0.0);
    }
    return Strand(id, std::move(pts));
  };

  std::vector<Strand> strands;
  strands.push_back(strand_across("in6", 6));
  strands.push_back(strand_across("in5", 5));   // exactly at threshold
  strands.push_back(strand_across("out4", 4));
  strands.push_back(strand_across("out0", 0));
  const auto [inside, outside] = mask_strands(StrandSet(std::move(strands)), mask, spec, 0.5);

  CHECK(inside.size() == 2);
  CHECK(inside.find("in6") != nullptr);
  CHECK(inside.find("in5") != nullptr);
  CHECK(outside.size() == 2);
  CHECK(outside.find("out4") != nullptr);
  CHECK(outside.find("out0") != nullptr);
}

TEST_CASE("points projecting off the image never count as mask hits") {
  const ProjectionSpec spec{20, 20};
  const GrayImage mask(20, 20, std::vector<double>(20 * 20, 1.0));
  std::vector<Strand> strands;
  // 1 of 4 points lands inside the (all-bright) image
  strands.emplace_back("s", std::vector<Point3>{{-50.0, 0.0, 0.0},
                                                {100.0, 5.0, 0.0},
                                                {5.0, 500.0, 0.0},
                                                {5.0, 5.0, 0.0}});
  const auto [inside, outside] = mask_strands(StrandSet(std::move(strands)), mask, spec, 0.5);
  CHECK(inside.empty());
  CHECK(outside.size() == 1);
}

TEST_CASE("mask partition rejects mismatched dimensions") {
  const ProjectionSpec spec{20, 20};
  const GrayImage mask(10, 20, std::vector<double>(10 * 20, 0.0));
  std::vector<Strand> strands;
  strands.emplace_back("s", std::vector<Point3>{{0.0, 0.0, 0.0}, {1.0, 1.0, 0.0}});
  CHECK_THROWS_AS(mask_strands(StrandSet(std::move(strands)), mask, spec, 0.5),
                  ValidationError);
}
