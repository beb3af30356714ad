#include "braidrec/types.hpp"

#include <algorithm>
#include <unordered_set>

namespace braidrec {

Strand::Strand(std::string id, std::vector<Point3> points)
    : id_(std::move(id)), points_(std::move(points)) {
  if (points_.size() < 2) {
    throw ValidationError("degenerate-strand", "strand '" + id_ + "' has fewer than 2 points");
  }
  for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
    if (points_[i] == points_[i + 1]) {
      throw ValidationError("degenerate-strand",
                            "strand '" + id_ + "' has identical consecutive points at index " +
                                std::to_string(i));
    }
  }
}

std::optional<std::string> find_violation(const std::vector<Strand>& strands) {
  std::unordered_set<std::string> seen;
  seen.reserve(strands.size());
  for (const Strand& s : strands) {
    if (!seen.insert(s.id()).second) {
      return "duplicate-id";
    }
  }
  return std::nullopt;
}

StrandSet::StrandSet(std::vector<Strand> strands) : strands_(std::move(strands)) {
  if (auto v = find_violation(strands_)) {
    throw ValidationError(*v, "strand ids must be unique within a set");
  }
}

std::size_t StrandSet::total_points() const noexcept {
  std::size_t n = 0;
  for (const Strand& s : strands_) n += s.size();
  return n;
}

const Strand* StrandSet::find(const std::string& id) const noexcept {
  for (const Strand& s : strands_) {
    if (s.id() == id) return &s;
  }
  return nullptr;
}

GrayImage::GrayImage(int width, int height)
    : width_(width), height_(height),
      pixels_(static_cast<std::size_t>(width > 0 ? width : 0) * (height > 0 ? height : 0), 0.0) {
  if (width <= 0 || height <= 0) {
    throw ValidationError("bad-image-size", "image dimensions must be positive");
  }
}

GrayImage::GrayImage(int width, int height, std::vector<double> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (width <= 0 || height <= 0) {
    throw ValidationError("bad-image-size", "image dimensions must be positive");
  }
  if (pixels_.size() != static_cast<std::size_t>(width) * height) {
    throw ValidationError("bad-image-size", "pixel count does not match width*height");
  }
  for (double v : pixels_) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ValidationError("bad-pixel-value", "pixel values must lie in [0,1]");
    }
  }
}

MidLineAnnotation::MidLineAnnotation(std::vector<Point2> polyline, double width_px)
    : polyline_(std::move(polyline)), width_px_(width_px) {
  if (polyline_.size() < 2) {
    throw ValidationError("degenerate-midline", "mid-line needs at least 2 points");
  }
  if (!(width_px_ > 0.0) || !std::isfinite(width_px_)) {
    throw ValidationError("bad-midline-width", "mid-line width must be positive");
  }
  // root-first: smallest y first
  if (polyline_.front().y > polyline_.back().y) {
    std::reverse(polyline_.begin(), polyline_.end());
  }
  for (std::size_t i = 0; i + 1 < polyline_.size(); ++i) {
    if (polyline_[i + 1].y < polyline_[i].y) {
      throw ValidationError("non-monotone-midline",
                            "mid-line must be monotone in y after orientation normalization");
    }
    if (polyline_[i + 1].x == polyline_[i].x && polyline_[i + 1].y == polyline_[i].y) {
      throw ValidationError("degenerate-midline", "mid-line has identical consecutive points");
    }
  }
}

double arc_length(const Strand& strand) {
  double total = 0.0;
  const auto& pts = strand.points();
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    total += distance(pts[i], pts[i + 1]);
  }
  return total;
}

}  // namespace braidrec
