#pragma once

#include <span>
#include <utility>

#include "braidrec/braid.hpp"
#include "braidrec/types.hpp"

namespace braidrec {

// Orthographic mapping from model space to pixels: (x, y) -> (col, row), z dropped.
// Pixel (row r, col c) is centered at (x=c, y=r).
struct ProjectionSpec {
  int width = 256;
  int height = 512;

  void validate() const {
    if (width <= 0 || height <= 0) {
      throw ValidationError("bad-image-size", "projection target must be positive-sized");
    }
  }
};

struct CannyConfig {
  double gaussian_sigma = 1.4;
  double low_threshold = 0.1;   // on gradient magnitude normalized to [0,1]
  double high_threshold = 0.3;

  void validate() const {
    if (!(gaussian_sigma > 0.0)) {
      throw ValidationError("invalid-canny-config", "gaussian_sigma must be > 0");
    }
    if (!(low_threshold > 0.0 && low_threshold < high_threshold && high_threshold <= 1.0)) {
      throw ValidationError("invalid-canny-config", "need 0 < low < high <= 1");
    }
  }
};

// Union of soft discs of the given per-point radii around every projected
// strand point. Pixels inside a disc read 1; for softness s > 0 the value falls
// off linearly to 0 over s pixels beyond the radius. Overlaps blend with max.
// `radii` is flattened over all strands' points in set order.
GrayImage rasterize_tube(const StrandSet& strands, std::span<const double> radii,
                         const ProjectionSpec& spec, double softness);

// Synthetic edge band: clamp(rasterize(r) - rasterize(r/1.4), 0, 1), using the
// braid's per-point radius profile.
GrayImage edge_image_synthetic(const SyntheticBraid& braid, const ProjectionSpec& spec,
                               double softness);

// Canny detector: Gaussian blur -> Sobel -> non-maximum suppression ->
// hysteresis. Gradient magnitudes are normalized by their maximum before
// thresholding; output pixels are exactly 0 or 1.
GrayImage canny(const GrayImage& image, const CannyConfig& cfg);

// Partition strands by mask coverage: a strand is inside iff at least
// `threshold` fraction of its projected points hit mask pixels > 0.5
// (points projecting outside the image never count as hits).
std::pair<StrandSet, StrandSet> mask_strands(const StrandSet& strands, const GrayImage& mask,
                                             const ProjectionSpec& spec, double threshold);

}  // namespace braidrec
