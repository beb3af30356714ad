#include "braidrec/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace braidrec {

namespace {

inline double sq(double v) { return v * v; }

}  // namespace

PointGrid::PointGrid(std::vector<Point3> points) : points_(std::move(points)) {
  if (points_.empty()) {
    throw ValidationError("empty-point-set", "PointGrid needs at least one point");
  }
  Point3 lo = points_[0];
  Point3 hi = points_[0];
  for (const Point3& p : points_) {
    lo = Point3{std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
    hi = Point3{std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
  }
  origin_ = lo;
  const double extent = std::max({hi.x - lo.x, hi.y - lo.y, hi.z - lo.z});
  const int cells_per_axis = std::clamp(
      static_cast<int>(std::cbrt(static_cast<double>(points_.size()))), 1, 64);
  cell_size_ = extent > 0.0 ? extent / cells_per_axis : 1.0;
  nx_ = static_cast<int>((hi.x - lo.x) / cell_size_) + 1;
  ny_ = static_cast<int>((hi.y - lo.y) / cell_size_) + 1;
  nz_ = static_cast<int>((hi.z - lo.z) / cell_size_) + 1;
  cells_.assign(static_cast<std::size_t>(nx_) * ny_ * nz_, {});
  for (std::uint32_t i = 0; i < points_.size(); ++i) {
    const Point3& p = points_[i];
    const int cx = std::min(static_cast<int>((p.x - origin_.x) / cell_size_), nx_ - 1);
    const int cy = std::min(static_cast<int>((p.y - origin_.y) / cell_size_), ny_ - 1);
    const int cz = std::min(static_cast<int>((p.z - origin_.z) / cell_size_), nz_ - 1);
    cells_[cell_of(cx, cy, cz)].push_back(i);
  }
}

std::size_t PointGrid::cell_of(int cx, int cy, int cz) const noexcept {
  return (static_cast<std::size_t>(cz) * ny_ + cy) * nx_ + cx;
}

std::pair<double, std::size_t> PointGrid::nearest(const Point3& q) const {
  // Clamping the raw quotient keeps queries absurdly far from the box from
  // overflowing the int cell coordinates; past the box the exact value is
  // irrelevant, only the side matters.
  auto cell_coord = [&](double v, double o) {
    return static_cast<int>(std::clamp(std::floor((v - o) / cell_size_), -1.0e9, 1.0e9));
  };
  const int qx = cell_coord(q.x, origin_.x);
  const int qy = cell_coord(q.y, origin_.y);
  const int qz = cell_coord(q.z, origin_.z);

  double best_d2 = std::numeric_limits<double>::infinity();
  std::size_t best_idx = 0;
  bool found = false;

  auto scan_cell = [&](int cx, int cy, int cz) {
    for (std::uint32_t idx : cells_[cell_of(cx, cy, cz)]) {
      const Point3& p = points_[idx];
      const double d2 = sq(p.x - q.x) + sq(p.y - q.y) + sq(p.z - q.z);
      if (!found || d2 < best_d2 || (d2 == best_d2 && idx < best_idx)) {
        best_d2 = d2;
        best_idx = idx;
        found = true;
      }
    }
  };

  // First ring whose shell can intersect the box at all, and the last ring
  // that still contains box cells; between them every shell-box intersection
  // is scanned with the face ranges clipped to the box, so a query far outside
  // costs O(box) rather than O(distance^3).
  const int first_ring =
      std::max({0, -qx, qx - (nx_ - 1), -qy, qy - (ny_ - 1), -qz, qz - (nz_ - 1)});
  const int last_ring = std::max({qx, nx_ - 1 - qx, qy, ny_ - 1 - qy, qz, nz_ - 1 - qz});

  for (int ring = first_ring; ring <= last_ring; ++ring) {
    // Any point in a cell at Chebyshev cell distance `ring` is at Euclidean
    // distance >= (ring-1)*cell_size from q, so stop once that bound exceeds
    // the best distance found so far.
    if (found && ring >= 1 && sq((ring - 1) * cell_size_) > best_d2) break;
    if (ring == 0) {
      scan_cell(qx, qy, qz);
      continue;
    }
    const int y0 = std::max(qy - ring, 0), y1 = std::min(qy + ring, ny_ - 1);
    const int z0 = std::max(qz - ring, 0), z1 = std::min(qz + ring, nz_ - 1);
    for (const int cx : {qx - ring, qx + ring}) {
      if (cx < 0 || cx >= nx_) continue;
      for (int cy = y0; cy <= y1; ++cy) {
        for (int cz = z0; cz <= z1; ++cz) scan_cell(cx, cy, cz);
      }
    }
    const int x0 = std::max(qx - ring + 1, 0), x1 = std::min(qx + ring - 1, nx_ - 1);
    for (const int cy : {qy - ring, qy + ring}) {
      if (cy < 0 || cy >= ny_) continue;
      for (int cx = x0; cx <= x1; ++cx) {
        for (int cz = z0; cz <= z1; ++cz) scan_cell(cx, cy, cz);
      }
    }
    const int yi0 = std::max(qy - ring + 1, 0), yi1 = std::min(qy + ring - 1, ny_ - 1);
    for (const int cz : {qz - ring, qz + ring}) {
      if (cz < 0 || cz >= nz_) continue;
      for (int cx = x0; cx <= x1; ++cx) {
        for (int cy = yi0; cy <= yi1; ++cy) scan_cell(cx, cy, cz);
      }
    }
  }
  return {std::sqrt(best_d2), best_idx};
}

}  // namespace braidrec
