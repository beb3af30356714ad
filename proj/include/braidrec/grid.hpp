#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "braidrec/types.hpp"

namespace braidrec {

// Uniform-grid exact nearest-neighbor index over a fixed point set.
// Queries return the exact minimum Euclidean distance (equal to a brute-force
// scan bit for bit) and the index of the nearest point, ties broken by the
// smaller index.
class PointGrid {
 public:
  explicit PointGrid(std::vector<Point3> points);

  std::pair<double, std::size_t> nearest(const Point3& q) const;
  std::size_t size() const noexcept { return points_.size(); }
  const std::vector<Point3>& points() const noexcept { return points_; }

 private:
  std::size_t cell_of(int cx, int cy, int cz) const noexcept;

  std::vector<Point3> points_;
  std::vector<std::vector<std::uint32_t>> cells_;
  Point3 origin_;
  double cell_size_ = 1.0;
  int nx_ = 1, ny_ = 1, nz_ = 1;
};

}  // namespace braidrec
