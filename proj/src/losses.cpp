#include "braidrec/losses.hpp"

#include <algorithm>
#include <cmath>

#include "braidrec/grid.hpp"

namespace braidrec {

namespace {

std::vector<Point3> gather_points(const StrandSet& set) {
  std::vector<Point3> pts;
  for (const auto& s : set.strands()) {
    pts.insert(pts.end(), s.points().begin(), s.points().end());
  }
  return pts;
}

double mean_nn_distance(const std::vector<Point3>& from, const PointGrid& to_grid) {
  double sum = 0.0;
  for (const auto& p : from) {
    sum += to_grid.nearest(p).first;
  }
  return sum / static_cast<double>(from.size());
}

}  // namespace

double chamfer(const StrandSet& s1, const StrandSet& s2) {
  const auto p1 = gather_points(s1);
  const auto p2 = gather_points(s2);
  PointGrid g1(p1);  // throws empty-point-set when a side has no points
  PointGrid g2(p2);
  return mean_nn_distance(p1, g2) + mean_nn_distance(p2, g1);
}

double projection_bce(const GrayImage& real_edges, const GrayImage& synth_edges, double eps) {
  if (real_edges.width() != synth_edges.width() || real_edges.height() != synth_edges.height()) {
    throw ValidationError("dimension-mismatch", "edge images must share dimensions");
  }
  if (!(eps > 0.0 && eps < 0.5)) {
    throw ValidationError("invalid-weights", "bce epsilon must lie in (0, 0.5)");
  }
  const auto& p = real_edges.pixels();
  const auto& q = synth_edges.pixels();
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double qi = std::clamp(q[i], eps, 1.0 - eps);
    sum += p[i] * std::log(qi) + (1.0 - p[i]) * std::log(1.0 - qi);
  }
  return -sum / static_cast<double>(p.size());
}

double depth_regularizer(std::span<const double> z, double delta_t, double b, double lambda,
                         double b_anchor) {
  if (z.size() < 3) {
    throw ValidationError("too-few-samples", "depth regularizer needs at least 3 z samples");
  }
  if (!(delta_t > 0.0) || !std::isfinite(delta_t)) {
    throw ValidationError("bad-delta-t", "delta_t must be positive and finite");
  }
  const std::size_t m = z.size() - 1;  // forward differences
  std::vector<double> dz(m);
  for (std::size_t k = 0; k < m; ++k) {
    dz[k] = (z[k + 1] - z[k]) / delta_t;
  }
  double mean = 0.0;
  for (double v : dz) mean += v;
  mean /= static_cast<double>(m);
  double var = 0.0;
  for (double v : dz) var += (v - mean) * (v - mean);
  var /= static_cast<double>(m - 1);  // sample variance of the derivative samples
  return std::sqrt(var) + lambda * std::abs(b - b_anchor);
}

LossReport total(const StrandSet& s1, const StrandSet& s2, const GrayImage& real_edges,
                 const GrayImage& synth_edges, const std::vector<std::vector<double>>& z_per_bunch,
                 const BraidParams& params, const LossWeights& weights) {
  weights.validate();
  LossReport r;
  r.l_pc = chamfer(s1, s2);
  r.l_proj = projection_bce(real_edges, synth_edges, weights.bce_epsilon);
  const double dt = params.t_step * params.t_scale;
  for (const auto& z : z_per_bunch) {
    r.l_reg += depth_regularizer(z, dt, params.depth_amplitude, weights.lambda_reg_b,
                                 weights.b_anchor);
  }
  r.l_total = weights.lambda_pc * r.l_pc + weights.lambda_proj * r.l_proj +
              weights.lambda_reg * r.l_reg;
  return r;
}

}  // namespace braidrec
