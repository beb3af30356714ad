#include "braidrec/fit.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <tuple>

namespace braidrec {

double get_param(const BraidParams& params, LearnableParam which) {
  switch (which) {
    case LearnableParam::kAmplitude: return params.amplitude;
    case LearnableParam::kDepthAmplitude: return params.depth_amplitude;
    case LearnableParam::kFrequency: return params.frequency;
    case LearnableParam::kTScale: return params.t_scale;
    case LearnableParam::kRadius: return params.radius;
    case LearnableParam::kShiftZ: return params.shift_z;
  }
  return 0.0;
}

void set_param(BraidParams& params, LearnableParam which, double value) {
  switch (which) {
    case LearnableParam::kAmplitude: params.amplitude = value; return;
    case LearnableParam::kDepthAmplitude: params.depth_amplitude = value; return;
    case LearnableParam::kFrequency: params.frequency = value; return;
    case LearnableParam::kTScale: params.t_scale = value; return;
    case LearnableParam::kRadius: params.radius = value; return;
    case LearnableParam::kShiftZ: params.shift_z = value; return;
  }
}

void FitConfig::validate() const {
  if (epochs < 1) throw ValidationError("invalid-fit-config", "epochs must be >= 1");
  if (!(lr > 0.0)) throw ValidationError("invalid-fit-config", "lr must be > 0");
  if (!(lr_drop_factor > 0.0 && lr_drop_factor <= 1.0)) {
    throw ValidationError("invalid-fit-config", "lr_drop_factor must lie in (0, 1]");
  }
  if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0 && adam_beta2 >= 0.0 && adam_beta2 < 1.0)) {
    throw ValidationError("invalid-fit-config", "adam betas must lie in [0, 1)");
  }
  if (!(adam_eps > 0.0)) throw ValidationError("invalid-fit-config", "adam_eps must be > 0");
  for (double h : fd_step) {
    if (!(h > 0.0)) throw ValidationError("invalid-fit-config", "fd steps must be > 0");
  }
  for (int e : lr_drop_epochs) {
    if (e < 1) throw ValidationError("invalid-fit-config", "drop epochs must be >= 1");
  }
  if (n_points < 2) throw ValidationError("invalid-fit-config", "n_points must be >= 2");
  if (n_bunches < 2) throw ValidationError("invalid-fit-config", "n_bunches must be >= 2");
  if (!(softness >= 0.0)) throw ValidationError("invalid-fit-config", "softness must be >= 0");
}

namespace {

double point_segment_distance2d(const Point2& p, const Point2& a, const Point2& b) {
  const double vx = b.x - a.x, vy = b.y - a.y;
  const double len2 = vx * vx + vy * vy;
  double t = 0.0;
  if (len2 > 0.0) {
    t = std::clamp(((p.x - a.x) * vx + (p.y - a.y) * vy) / len2, 0.0, 1.0);
  }
  const double dx = p.x - (a.x + t * vx), dy = p.y - (a.y + t * vy);
  return std::sqrt(dx * dx + dy * dy);
}

double polyline_distance2d(const Point2& p, const std::vector<Point2>& line) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < line.size(); ++i) {
    best = std::min(best, point_segment_distance2d(p, line[i], line[i + 1]));
  }
  return best;
}

// n samples equally spaced by arc length along the polyline (endpoints kept).
std::vector<Point2> resample_polyline(const std::vector<Point2>& line, int n) {
  std::vector<double> cum(line.size(), 0.0);
  for (std::size_t i = 1; i < line.size(); ++i) {
    const double dx = line[i].x - line[i - 1].x, dy = line[i].y - line[i - 1].y;
    cum[i] = cum[i - 1] + std::sqrt(dx * dx + dy * dy);
  }
  const double total = cum.back();
  std::vector<Point2> out;
  out.reserve(n);
  std::size_t seg = 0;
  for (int k = 0; k < n; ++k) {
    if (k == n - 1) {
      out.push_back(line.back());
      break;
    }
    const double s = total * static_cast<double>(k) / static_cast<double>(n - 1);
    while (seg + 2 < line.size() && cum[seg + 1] < s) ++seg;
    const double seg_len = cum[seg + 1] - cum[seg];
    const double u = seg_len > 0.0 ? (s - cum[seg]) / seg_len : 0.0;
    out.emplace_back(line[seg].x + u * (line[seg + 1].x - line[seg].x),
                     line[seg].y + u * (line[seg + 1].y - line[seg].y));
  }
  return out;
}

}  // namespace

BraidParams initialize(const MidLineAnnotation& midline, const StrandSet& braid_strands,
                       const FitConfig& cfg) {
  cfg.validate();
  if (braid_strands.empty()) {
    throw ValidationError("empty-point-set", "initialize needs braid-region strands");
  }

  BraidParams p;
  p.n_points = cfg.n_points;
  p.n_bunches = cfg.n_bunches;
  p.amplitude = midline.width_px() / 1.75;
  p.depth_amplitude = 10.0;
  p.frequency = 1.0;
  p.t_step = 0.05;
  p.t_scale = 1.0;
  p.radius = 7.0;

  const auto samples = resample_polyline(midline.polyline(), cfg.n_points);
  p.shift_x.reserve(samples.size());
  p.shift_y.reserve(samples.size());
  for (const auto& s : samples) {
    p.shift_x.push_back(s.x);
    p.shift_y.push_back(s.y);
  }

  // z' = minimal depth among strand points projecting close to the mid-line.
  const double near = midline.width_px() / 2.0;
  double min_z = std::numeric_limits<double>::infinity();
  for (const auto& strand : braid_strands.strands()) {
    for (const auto& pt : strand.points()) {
      if (polyline_distance2d(Point2(pt.x, pt.y), midline.polyline()) <= near) {
        min_z = std::min(min_z, pt.z);
      }
    }
  }
  if (!std::isfinite(min_z)) {
    throw ValidationError("no-points-near-midline",
                          "no strand point projects within width/2 of the mid-line");
  }
  p.shift_z = min_z;
  p.validate();
  return p;
}

std::pair<BraidParams, AdamState> adam_step(const BraidParams& params,
                                            const std::array<double, kNumLearnable>& grads,
                                            const AdamState& state, double lr,
                                            const FitConfig& cfg) {
  for (double g : grads) {
    if (!std::isfinite(g)) {
      throw ValidationError("non-finite-gradient", "gradient contains a non-finite entry");
    }
  }
  AdamState next = state;
  next.t = state.t + 1;
  BraidParams out = params;
  const double bc1 = 1.0 - std::pow(cfg.adam_beta1, static_cast<double>(next.t));
  const double bc2 = 1.0 - std::pow(cfg.adam_beta2, static_cast<double>(next.t));
  for (int i = 0; i < kNumLearnable; ++i) {
    next.m[i] = cfg.adam_beta1 * state.m[i] + (1.0 - cfg.adam_beta1) * grads[i];
    next.v[i] = cfg.adam_beta2 * state.v[i] + (1.0 - cfg.adam_beta2) * grads[i] * grads[i];
    const double m_hat = next.m[i] / bc1;
    const double v_hat = next.v[i] / bc2;
    const auto which = static_cast<LearnableParam>(i);
    set_param(out, which, get_param(params, which) - lr * m_hat / (std::sqrt(v_hat) + cfg.adam_eps));
  }
  return {out, next};
}

std::array<double, kNumLearnable> gradient_fd(
    const BraidParams& params, const LearnableMask& mask,
    const std::function<double(const BraidParams&)>& loss_fn,
    const std::array<double, kNumLearnable>& fd_step) {
  std::array<double, kNumLearnable> grads{};
  for (int i = 0; i < kNumLearnable; ++i) {
    const auto which = static_cast<LearnableParam>(i);
    if (!mask.enabled(which)) continue;
    const double h = fd_step[i];
    const double v = get_param(params, which);
    BraidParams plus = params;
    set_param(plus, which, v + h);
    BraidParams minus = params;
    set_param(minus, which, v - h);
    const double lp = loss_fn(plus);
    const double lm = loss_fn(minus);
    if (!std::isfinite(lp) || !std::isfinite(lm)) {
      throw ValidationError("non-finite-loss", "loss is non-finite at a probe point");
    }
    grads[i] = (lp - lm) / (2.0 * h);
  }
  return grads;
}

double lr_at_epoch(const FitConfig& cfg, int epoch) {
  int drops = 0;
  for (int d : cfg.lr_drop_epochs) {
    if (d <= epoch) ++drops;
  }
  return cfg.lr * std::pow(cfg.lr_drop_factor, drops);
}

namespace {

std::vector<std::vector<double>> centerline_depths(const SyntheticBraid& braid) {
  std::vector<std::vector<double>> z;
  z.reserve(braid.centerlines().size());
  for (const auto& c : braid.centerlines()) {
    std::vector<double> zi;
    zi.reserve(c.size());
    for (const auto& pt : c.points()) zi.push_back(pt.z);
    z.push_back(std::move(zi));
  }
  return z;
}

}  // namespace

FitTrace fit_from(const BraidParams& start, const StrandSet& coarse_braid,
                  const GrayImage& real_edges, const LossWeights& weights, const FitConfig& cfg) {
  cfg.validate();
  weights.validate();
  start.validate();
  const auto t0 = std::chrono::steady_clock::now();

  BraidParams params = start;
  if (params.bunch_noise.empty()) {
    // Materialize the per-bunch noise once so every evaluation, including the
    // finite-difference probes, sees the identical braid geometry.
    params.bunch_noise = generate(params, cfg.seed).params().bunch_noise;
  }

  const ProjectionSpec spec{real_edges.width(), real_edges.height()};
  // Terms with zero weight are skipped entirely (and read 0 in the trace).
  const auto evaluate = [&](const BraidParams& p) -> LossReport {
    const SyntheticBraid braid = generate(p, cfg.seed);
    LossReport r;
    if (weights.lambda_pc > 0.0) {
      r.l_pc = chamfer(braid.tube_strands(), coarse_braid);
    }
    if (weights.lambda_proj > 0.0) {
      const GrayImage synth = edge_image_synthetic(braid, spec, cfg.softness);
      r.l_proj = projection_bce(real_edges, synth, weights.bce_epsilon);
    }
    if (weights.lambda_reg > 0.0) {
      const double dt = p.t_step * p.t_scale;
      for (const auto& z : centerline_depths(braid)) {
        r.l_reg += depth_regularizer(z, dt, p.depth_amplitude, weights.lambda_reg_b,
                                     weights.b_anchor);
      }
    }
    r.l_total = weights.lambda_pc * r.l_pc + weights.lambda_proj * r.l_proj +
                weights.lambda_reg * r.l_reg;
    return r;
  };
  const auto loss_fn = [&](const BraidParams& p) { return evaluate(p).l_total; };

  FitTrace trace;
  trace.reports.reserve(cfg.epochs);
  trace.lrs.reserve(cfg.epochs);
  AdamState state;
  BraidParams best = params;
  LossReport best_report;
  double best_total = std::numeric_limits<double>::infinity();

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const double lr = lr_at_epoch(cfg, epoch);
    const LossReport report = evaluate(params);
    if (!std::isfinite(report.l_total)) {
      trace.diverged = true;
      break;
    }
    trace.reports.push_back(report);
    trace.lrs.push_back(lr);
    if (report.l_total < best_total) {
      best_total = report.l_total;
      best = params;
      best_report = report;
    }
    try {
      const auto grads = gradient_fd(params, cfg.learnable, loss_fn, cfg.fd_step);
      std::tie(params, state) = adam_step(params, grads, state, lr, cfg);
    } catch (const ValidationError& e) {
      if (e.code() == "non-finite-loss") {
        trace.diverged = true;
        break;
      }
      throw;
    }
  }

  trace.final_params = best;
  trace.final_report = best_report;
  trace.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return trace;
}

FitTrace fit(const StrandSet& coarse_braid, const GrayImage& real_edges,
             const MidLineAnnotation& midline, const LossWeights& weights, const FitConfig& cfg) {
  return fit_from(initialize(midline, coarse_braid, cfg), coarse_braid, real_edges, weights, cfg);
}

SyntheticBraid adjust_radius(const SyntheticBraid& braid) {
  constexpr int kHalf = 4;  // window of 9, clamped at the ends
  std::vector<std::vector<double>> smoothed;
  smoothed.reserve(braid.radius_profile().size());
  for (const auto& profile : braid.radius_profile()) {
    const int n = static_cast<int>(profile.size());
    std::vector<double> out(profile.size());
    for (int k = 0; k < n; ++k) {
      double sum = 0.0;
      for (int j = -kHalf; j <= kHalf; ++j) {
        sum += profile[std::clamp(k + j, 0, n - 1)];
      }
      out[k] = sum / (2 * kHalf + 1);
    }
    smoothed.push_back(std::move(out));
  }
  return SyntheticBraid(braid.params(), braid.centerlines(), std::move(smoothed));
}

}  // namespace braidrec
