#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "braidrec/types.hpp"

namespace braidrec {

// Learnable parameters of the synthetic braid model. Bunch i's centerline is
//   x = amplitude * sin(frequency*t_k + 2*pi*i/n_bunches) + shift_x[k]
//   y = shift_y[k]                        (t_k when shift_y is empty)
//   z = depth_amplitude * sin(2*(frequency*t_k + 2*pi*i/n_bunches)) + shift_z
// with t_k = t_scale * k * t_step and per-bunch tube radius
// (1 + bunch_noise[i]) * radius. Empty shift vectors mean the canonical
// straight axis (0, t_k, 0).
struct BraidParams {
  double amplitude = 20.0;        // braid half-width, >= 0
  double depth_amplitude = 10.0;  // depth oscillation amplitude
  double frequency = 1.0;         // angular frequency, > 0
  double t_step = 0.05;           // parameter increment per point, > 0
  double t_scale = 1.0;           // global reparameterization of t
  int n_points = 200;             // >= 2
  int n_bunches = 3;              // >= 2
  double radius = 7.0;            // tube radius, > 0
  double shift_z = 0.0;           // scalar depth offset
  std::vector<double> shift_x;    // per-point, empty or n_points long
  std::vector<double> shift_y;    // per-point absolute y, empty or n_points long
  std::vector<double> bunch_noise;  // per-bunch in (-1,1); empty = drawn from seed

  void validate() const;  // throws ValidationError
  double t_at(int k) const noexcept { return t_scale * k * t_step; }
};

// Orthonormal moving frame along a centerline.
struct Frame {
  Point3 tangent;
  Point3 normal;
  Point3 binormal;
};

// Parallel-transported frames, one per centerline point.
std::vector<Frame> transport_frames(const std::vector<Point3>& centerline);

// A generated braid: per-bunch centerlines, the expanded tube strands,
// the strand-to-bunch map and the per-point radius profile.
class SyntheticBraid {
 public:
  SyntheticBraid(BraidParams params, std::vector<Strand> centerlines,
                 std::vector<std::vector<double>> radius_profile);

  const BraidParams& params() const noexcept { return params_; }
  const std::vector<Strand>& centerlines() const noexcept { return centerlines_; }
  const StrandSet& tube_strands() const noexcept { return tube_strands_; }
  const std::map<std::string, int>& bunch_of() const noexcept { return bunch_of_; }
  // radius_profile()[bunch][point]
  const std::vector<std::vector<double>>& radius_profile() const noexcept {
    return radius_profile_;
  }
  int n_bunches() const noexcept { return static_cast<int>(centerlines_.size()); }

 private:
  void build_tube();

  BraidParams params_;
  std::vector<Strand> centerlines_;
  std::vector<std::vector<double>> radius_profile_;
  StrandSet tube_strands_;
  std::map<std::string, int> bunch_of_;
};

// Analytic sinusoidal mid-lines: bunch i has
//   x = a*sin(t + 2*pi*i/n_bunches), y = t, z = b*sin(2*(t + 2*pi*i/n_bunches)).
std::vector<Strand> midlines_eq1(double a, double b, const std::vector<double>& t_values,
                                 int n_bunches);

// Generate the full synthetic braid. Pure function of (params, seed); the seed
// only matters when params.bunch_noise is empty, in which case per-bunch noise
// is drawn uniformly from [-0.1, 0.1].
SyntheticBraid generate(const BraidParams& params, std::uint64_t seed);

// Minimum Euclidean distance from p to the bunch's centerline points and the
// index of the closest point; ties broken by the smaller index.
std::pair<double, std::size_t> centerline_distance(const Point3& p, const SyntheticBraid& braid,
                                                   int bunch);

// Number of strands expanded onto each bunch's tube surface (plus the centerline).
inline constexpr int kTubeSurfaceStrands = 6;

}  // namespace braidrec
