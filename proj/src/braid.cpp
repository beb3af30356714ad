#include "braidrec/braid.hpp"

#include <cmath>

#include "braidrec/rng.hpp"

namespace braidrec {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

}  // namespace

void BraidParams::validate() const {
  if (!(amplitude >= 0.0)) {
    throw ValidationError("invalid-params", "amplitude must be >= 0");
  }
  if (!(frequency > 0.0)) {
    throw ValidationError("invalid-params", "frequency must be > 0");
  }
  if (!(t_step > 0.0)) {
    throw ValidationError("invalid-params", "t_step must be > 0");
  }
  if (!(t_scale > 0.0)) {
    throw ValidationError("invalid-params", "t_scale must be > 0");
  }
  if (n_points < 2) {
    throw ValidationError("invalid-params", "n_points must be >= 2");
  }
  if (n_bunches < 2) {
    throw ValidationError("invalid-params", "n_bunches must be >= 2");
  }
  if (!(radius > 0.0)) {
    throw ValidationError("invalid-params", "radius must be > 0");
  }
  if (!std::isfinite(depth_amplitude) || !std::isfinite(shift_z)) {
    throw ValidationError("invalid-params", "parameters must be finite");
  }
  auto check_shift = [&](const std::vector<double>& v, const char* name) {
    if (!v.empty() && v.size() != static_cast<std::size_t>(n_points)) {
      throw ValidationError("invalid-params",
                            std::string(name) + " must be empty or n_points long");
    }
    for (double x : v) {
      if (!std::isfinite(x)) {
        throw ValidationError("invalid-params", std::string(name) + " must be finite");
      }
    }
  };
  check_shift(shift_x, "shift_x");
  check_shift(shift_y, "shift_y");
  if (!bunch_noise.empty() && bunch_noise.size() != static_cast<std::size_t>(n_bunches)) {
    throw ValidationError("invalid-params", "bunch_noise must be empty or n_bunches long");
  }
  for (double n : bunch_noise) {
    if (!(std::fabs(n) < 1.0)) {
      throw ValidationError("invalid-params", "bunch noise must satisfy |noise| < 1");
    }
  }
}

std::vector<Frame> transport_frames(const std::vector<Point3>& centerline) {
  const std::size_t n = centerline.size();
  std::vector<Frame> frames(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Point3& a = centerline[k == 0 ? 0 : k - 1];
    const Point3& b = centerline[k + 1 < n ? k + 1 : n - 1];
    Point3 t = b - a;
    const double len = norm(t);
    if (len == 0.0) {
      throw ValidationError("degenerate-strand", "centerline has a zero-length tangent");
    }
    frames[k].tangent = (1.0 / len) * t;
  }
  // initial normal: project a fixed reference direction off the tangent
  Point3 ref{1.0, 0.0, 0.0};
  if (std::fabs(dot(ref, frames[0].tangent)) > 0.9) ref = Point3{0.0, 0.0, 1.0};
  Point3 n0 = ref - dot(ref, frames[0].tangent) * frames[0].tangent;
  frames[0].normal = (1.0 / norm(n0)) * n0;
  frames[0].binormal = cross(frames[0].tangent, frames[0].normal);
  for (std::size_t k = 1; k < n; ++k) {
    Point3 nk = frames[k - 1].normal -
                dot(frames[k - 1].normal, frames[k].tangent) * frames[k].tangent;
    const double len = norm(nk);
    if (len < 1e-12) {
      // tangent flipped by ~90 degrees in one step; fall back to the binormal
      nk = frames[k - 1].binormal -
           dot(frames[k - 1].binormal, frames[k].tangent) * frames[k].tangent;
      nk = (1.0 / norm(nk)) * nk;
    } else {
      nk = (1.0 / len) * nk;
    }
    frames[k].normal = nk;
    frames[k].binormal = cross(frames[k].tangent, frames[k].normal);
  }
  return frames;
}

std::vector<Strand> midlines_eq1(double a, double b, const std::vector<double>& t_values,
                                 int n_bunches) {
  if (t_values.empty()) {
    throw ValidationError("empty-t-values", "t_values must be nonempty");
  }
  for (std::size_t i = 0; i + 1 < t_values.size(); ++i) {
    if (!(t_values[i + 1] > t_values[i])) {
      throw ValidationError("invalid-params", "t_values must be strictly increasing");
    }
  }
  if (n_bunches < 2) {
    throw ValidationError("invalid-params", "n_bunches must be >= 2");
  }
  std::vector<Strand> lines;
  lines.reserve(n_bunches);
  for (int i = 0; i < n_bunches; ++i) {
    const double phase = 2.0 * kPi * i / n_bunches;
    std::vector<Point3> pts;
    pts.reserve(t_values.size());
    for (double t : t_values) {
      pts.emplace_back(a * std::sin(t + phase), t, b * std::sin(2.0 * (t + phase)));
    }
    lines.emplace_back("L" + std::to_string(i), std::move(pts));
  }
  return lines;
}

SyntheticBraid::SyntheticBraid(BraidParams params, std::vector<Strand> centerlines,
                               std::vector<std::vector<double>> radius_profile)
    : params_(std::move(params)),
      centerlines_(std::move(centerlines)),
      radius_profile_(std::move(radius_profile)) {
  if (centerlines_.size() != radius_profile_.size()) {
    throw ValidationError("invalid-params", "one radius profile per centerline required");
  }
  for (std::size_t i = 0; i < centerlines_.size(); ++i) {
    if (centerlines_[i].size() != static_cast<std::size_t>(params_.n_points) ||
        radius_profile_[i].size() != centerlines_[i].size()) {
      throw ValidationError("invalid-params", "centerlines must have n_points points");
    }
  }
  build_tube();
}

void SyntheticBraid::build_tube() {
  std::vector<Strand> tube;
  bunch_of_.clear();
  for (std::size_t i = 0; i < centerlines_.size(); ++i) {
    const auto& pts = centerlines_[i].points();
    const auto frames = transport_frames(pts);
    const std::string base = "b" + std::to_string(i);
    tube.emplace_back(base + "_c", pts);
    bunch_of_[base + "_c"] = static_cast<int>(i);
    for (int j = 0; j < kTubeSurfaceStrands; ++j) {
      const double angle = 2.0 * kPi * j / kTubeSurfaceStrands;
      const double ca = std::cos(angle);
      const double sa = std::sin(angle);
      std::vector<Point3> surf;
      surf.reserve(pts.size());
      for (std::size_t k = 0; k < pts.size(); ++k) {
        const double r = radius_profile_[i][k];
        surf.push_back(pts[k] + r * ca * frames[k].normal + r * sa * frames[k].binormal);
      }
      const std::string id = base + "_s" + std::to_string(j);
      tube.emplace_back(id, std::move(surf));
      bunch_of_[id] = static_cast<int>(i);
    }
  }
  tube_strands_ = StrandSet(std::move(tube));
}

SyntheticBraid generate(const BraidParams& params, std::uint64_t seed) {
  params.validate();
  BraidParams p = params;
  if (p.bunch_noise.empty()) {
    Rng rng(seed);
    p.bunch_noise.resize(p.n_bunches);
    for (double& n : p.bunch_noise) n = rng.uniform(-0.1, 0.1);
  }

  std::vector<Strand> centerlines;
  std::vector<std::vector<double>> profile;
  centerlines.reserve(p.n_bunches);
  profile.reserve(p.n_bunches);
  for (int i = 0; i < p.n_bunches; ++i) {
    const double bunch_phase = 2.0 * kPi * i / p.n_bunches;
    std::vector<Point3> pts;
    pts.reserve(p.n_points);
    for (int k = 0; k < p.n_points; ++k) {
      const double t = p.t_at(k);
      const double phase = p.frequency * t + bunch_phase;
      const double x =
          p.amplitude * std::sin(phase) + (p.shift_x.empty() ? 0.0 : p.shift_x[k]);
      const double y = p.shift_y.empty() ? t : p.shift_y[k];
      const double z = p.depth_amplitude * std::sin(2.0 * phase) + p.shift_z;
      pts.emplace_back(x, y, z);
    }
    centerlines.emplace_back("b" + std::to_string(i) + "_mid", std::move(pts));
    profile.emplace_back(p.n_points, (1.0 + p.bunch_noise[i]) * p.radius);
  }
  return SyntheticBraid(std::move(p), std::move(centerlines), std::move(profile));
}

std::pair<double, std::size_t> centerline_distance(const Point3& p, const SyntheticBraid& braid,
                                                   int bunch) {
  if (bunch < 0 || bunch >= braid.n_bunches()) {
    throw ValidationError("invalid-bunch", "bunch index out of range");
  }
  const auto& pts = braid.centerlines()[bunch].points();
  double best = distance(p, pts[0]);
  std::size_t best_idx = 0;
  for (std::size_t k = 1; k < pts.size(); ++k) {
    const double d = distance(p, pts[k]);
    if (d < best) {
      best = d;
      best_idx = k;
    }
  }
  return {best, best_idx};
}

}  // namespace braidrec
