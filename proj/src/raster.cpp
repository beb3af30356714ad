#include "braidrec/raster.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace braidrec {

namespace {

void splat_disc(std::vector<double>& img, int width, int height, double px, double py,
                double radius, double softness) {
  const double reach = radius + softness;
  const int col_lo = std::max(0, static_cast<int>(std::ceil(px - reach)));
  const int col_hi = std::min(width - 1, static_cast<int>(std::floor(px + reach)));
  const int row_lo = std::max(0, static_cast<int>(std::ceil(py - reach)));
  const int row_hi = std::min(height - 1, static_cast<int>(std::floor(py + reach)));
  for (int r = row_lo; r <= row_hi; ++r) {
    const double dy = r - py;
    double* row = img.data() + static_cast<std::size_t>(r) * width;
    for (int c = col_lo; c <= col_hi; ++c) {
      const double dx = c - px;
      const double d = std::sqrt(dx * dx + dy * dy);
      double v;
      if (d <= radius) {
        v = 1.0;
      } else if (softness > 0.0 && d < reach) {
        v = (reach - d) / softness;
      } else {
        continue;
      }
      if (v > row[c]) row[c] = v;
    }
  }
}

}  // namespace

GrayImage rasterize_tube(const StrandSet& strands, std::span<const double> radii,
                         const ProjectionSpec& spec, double softness) {
  spec.validate();
  if (!(softness >= 0.0)) {
    throw ValidationError("invalid-softness", "softness must be >= 0");
  }
  if (radii.size() != strands.total_points()) {
    throw ValidationError("mismatched-radii",
                          "need exactly one radius per strand point (" +
                              std::to_string(strands.total_points()) + " points, " +
                              std::to_string(radii.size()) + " radii)");
  }
  std::vector<double> img(static_cast<std::size_t>(spec.width) * spec.height, 0.0);
  std::size_t idx = 0;
  for (const Strand& s : strands.strands()) {
    for (const Point3& p : s.points()) {
      splat_disc(img, spec.width, spec.height, p.x, p.y, radii[idx++], softness);
    }
  }
  return GrayImage(spec.width, spec.height, std::move(img));
}

GrayImage edge_image_synthetic(const SyntheticBraid& braid, const ProjectionSpec& spec,
                               double softness) {
  // The tube silhouette is the sweep of radius-r discs along the centerlines.
  std::vector<double> radii;
  for (const auto& profile : braid.radius_profile()) {
    radii.insert(radii.end(), profile.begin(), profile.end());
  }
  const StrandSet centers(braid.centerlines());
  const GrayImage outer = rasterize_tube(centers, radii, spec, softness);
  for (double& r : radii) r /= 1.4;
  const GrayImage inner = rasterize_tube(centers, radii, spec, softness);

  std::vector<double> band(outer.pixels().size());
  for (std::size_t i = 0; i < band.size(); ++i) {
    band[i] = std::clamp(outer.pixels()[i] - inner.pixels()[i], 0.0, 1.0);
  }
  return GrayImage(spec.width, spec.height, std::move(band));
}

namespace {

std::vector<double> gaussian_blur(const GrayImage& image, double sigma) {
  const int w = image.width();
  const int h = image.height();
  const int half = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  std::vector<double> kernel(2 * half + 1);
  double sum = 0.0;
  for (int i = -half; i <= half; ++i) {
    kernel[i + half] = std::exp(-0.5 * (i * i) / (sigma * sigma));
    sum += kernel[i + half];
  }
  for (double& k : kernel) k /= sum;

  auto clampi = [](int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); };
  std::vector<double> tmp(static_cast<std::size_t>(w) * h);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      double acc = 0.0;
      for (int i = -half; i <= half; ++i) {
        acc += kernel[i + half] * image.at(r, clampi(c + i, 0, w - 1));
      }
      tmp[static_cast<std::size_t>(r) * w + c] = acc;
    }
  }
  std::vector<double> out(tmp.size());
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      double acc = 0.0;
      for (int i = -half; i <= half; ++i) {
        acc += kernel[i + half] * tmp[static_cast<std::size_t>(clampi(r + i, 0, h - 1)) * w + c];
      }
      out[static_cast<std::size_t>(r) * w + c] = acc;
    }
  }
  return out;
}

}  // namespace

GrayImage canny(const GrayImage& image, const CannyConfig& cfg) {
  cfg.validate();
  const int w = image.width();
  const int h = image.height();
  const std::vector<double> blurred = gaussian_blur(image, cfg.gaussian_sigma);

  auto px = [&](int r, int c) {
    r = std::clamp(r, 0, h - 1);
    c = std::clamp(c, 0, w - 1);
    return blurred[static_cast<std::size_t>(r) * w + c];
  };

  std::vector<double> gx(blurred.size()), gy(blurred.size()), mag(blurred.size());
  double max_mag = 0.0;
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const double sx = (px(r - 1, c + 1) + 2.0 * px(r, c + 1) + px(r + 1, c + 1)) -
                        (px(r - 1, c - 1) + 2.0 * px(r, c - 1) + px(r + 1, c - 1));
      const double sy = (px(r + 1, c - 1) + 2.0 * px(r + 1, c) + px(r + 1, c + 1)) -
                        (px(r - 1, c - 1) + 2.0 * px(r - 1, c) + px(r - 1, c + 1));
      const std::size_t i = static_cast<std::size_t>(r) * w + c;
      gx[i] = sx;
      gy[i] = sy;
      mag[i] = std::sqrt(sx * sx + sy * sy);
      max_mag = std::max(max_mag, mag[i]);
    }
  }
  if (max_mag > 0.0) {
    for (double& m : mag) m /= max_mag;
  }

  auto mag_at = [&](int r, int c) {
    if (r < 0 || r >= h || c < 0 || c >= w) return 0.0;
    return mag[static_cast<std::size_t>(r) * w + c];
  };

  // non-maximum suppression along the quantized gradient direction; survivors
  // must strictly beat the backward neighbor so plateau edges keep one pixel
  std::vector<double> thin(blurred.size(), 0.0);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const std::size_t i = static_cast<std::size_t>(r) * w + c;
      if (mag[i] == 0.0) continue;
      const double angle = std::atan2(gy[i], gx[i]);
      const int dc = static_cast<int>(std::lround(std::cos(angle)));
      const int dr = static_cast<int>(std::lround(std::sin(angle)));
      const double forward = mag_at(r + dr, c + dc);
      const double backward = mag_at(r - dr, c - dc);
      if (mag[i] > backward && mag[i] >= forward) thin[i] = mag[i];
    }
  }

  // double threshold plus hysteresis over 8-connected weak pixels
  std::vector<double> out(blurred.size(), 0.0);
  std::vector<std::size_t> stack;
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const std::size_t i = static_cast<std::size_t>(r) * w + c;
      if (thin[i] >= cfg.high_threshold && out[i] == 0.0) {
        out[i] = 1.0;
        stack.push_back(i);
        while (!stack.empty()) {
          const std::size_t j = stack.back();
          stack.pop_back();
          const int jr = static_cast<int>(j / w);
          const int jc = static_cast<int>(j % w);
          for (int dr = -1; dr <= 1; ++dr) {
            for (int dc = -1; dc <= 1; ++dc) {
              const int nr = jr + dr;
              const int nc = jc + dc;
              if (nr < 0 || nr >= h || nc < 0 || nc >= w) continue;
              const std::size_t nidx = static_cast<std::size_t>(nr) * w + nc;
              if (out[nidx] == 0.0 && thin[nidx] >= cfg.low_threshold) {
                out[nidx] = 1.0;
                stack.push_back(nidx);
              }
            }
          }
        }
      }
    }
  }
  return GrayImage(w, h, std::move(out));
}

std::pair<StrandSet, StrandSet> mask_strands(const StrandSet& strands, const GrayImage& mask,
                                             const ProjectionSpec& spec, double threshold) {
  spec.validate();
  if (mask.width() != spec.width || mask.height() != spec.height) {
    throw ValidationError("dimension-mismatch", "mask dimensions must match the projection");
  }
  std::vector<Strand> inside, outside;
  for (const Strand& s : strands.strands()) {
    std::size_t hits = 0;
    for (const Point3& p : s.points()) {
      const int c = static_cast<int>(std::lround(p.x));
      const int r = static_cast<int>(std::lround(p.y));
      if (c < 0 || c >= mask.width() || r < 0 || r >= mask.height()) continue;
      if (mask.at(r, c) > 0.5) ++hits;
    }
    const double fraction = static_cast<double>(hits) / s.size();
    (fraction >= threshold ? inside : outside).push_back(s);
  }
  return {StrandSet(std::move(inside)), StrandSet(std::move(outside))};
}

}  // namespace braidrec
