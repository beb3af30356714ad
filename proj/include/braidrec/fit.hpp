#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "braidrec/braid.hpp"
#include "braidrec/losses.hpp"
#include "braidrec/raster.hpp"
#include "braidrec/types.hpp"

namespace braidrec {

// The scalar parameters the optimizer can touch. Per-point shifts are frozen
// after initialization; only t_scale reparameterizes the curve globally.
enum class LearnableParam {
  kAmplitude = 0,
  kDepthAmplitude,
  kFrequency,
  kTScale,
  kRadius,
  kShiftZ,
};
inline constexpr int kNumLearnable = 6;

double get_param(const BraidParams& params, LearnableParam which);
void set_param(BraidParams& params, LearnableParam which, double value);

struct LearnableMask {
  bool amplitude = true;
  bool depth_amplitude = true;
  bool frequency = true;
  bool t_scale = true;
  bool radius = false;  // contested in practice; off unless explicitly enabled
  bool shift_z = true;

  bool enabled(LearnableParam which) const {
    switch (which) {
      case LearnableParam::kAmplitude: return amplitude;
      case LearnableParam::kDepthAmplitude: return depth_amplitude;
      case LearnableParam::kFrequency: return frequency;
      case LearnableParam::kTScale: return t_scale;
      case LearnableParam::kRadius: return radius;
      case LearnableParam::kShiftZ: return shift_z;
    }
    return false;
  }
};

struct FitConfig {
  int epochs = 200;
  double lr = 1e-4;
  std::vector<int> lr_drop_epochs = {100, 133};
  double lr_drop_factor = 0.5;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  // Indexed by LearnableParam: a, b, w, t_scale, radius, z'.
  std::array<double, kNumLearnable> fd_step = {1e-2, 1e-2, 1e-3, 1e-3, 1e-2, 1e-2};
  LearnableMask learnable;
  std::uint64_t seed = 0;
  int n_points = 200;    // samples per centerline when initializing
  int n_bunches = 3;
  double softness = 1.0;  // rasterization falloff during fitting

  void validate() const;
};

struct AdamState {
  std::array<double, kNumLearnable> m{};
  std::array<double, kNumLearnable> v{};
  long t = 0;
};

struct FitTrace {
  std::vector<LossReport> reports;  // loss at the start of each epoch
  std::vector<double> lrs;          // learning rate used that epoch
  BraidParams final_params;         // lowest-total-loss parameters seen
  LossReport final_report;
  double wall_seconds = 0.0;
  bool diverged = false;
};

// Build starting parameters from the annotated mid-line and the coarse
// braid-region strands: per-point shifts from an arc-length resampling of the
// mid-line, a = width/1.75, z' = minimum z among strand points projecting
// within width/2 of the mid-line. Throws when no strand point is that close.
BraidParams initialize(const MidLineAnnotation& midline, const StrandSet& braid_strands,
                       const FitConfig& cfg);

// One bias-corrected Adam update. Entries with zero gradient keep their
// parameter bit-identical; non-finite gradients are an error.
std::pair<BraidParams, AdamState> adam_step(const BraidParams& params,
                                            const std::array<double, kNumLearnable>& grads,
                                            const AdamState& state, double lr,
                                            const FitConfig& cfg);

// Central finite differences (L(p+h) - L(p-h)) / 2h per enabled scalar;
// disabled entries are zero. Non-finite loss at a probe point is an error.
std::array<double, kNumLearnable> gradient_fd(
    const BraidParams& params, const LearnableMask& mask,
    const std::function<double(const BraidParams&)>& loss_fn,
    const std::array<double, kNumLearnable>& fd_step);

// Learning rate in effect at 1-based epoch `e`: lr * factor^(#drop epochs <= e).
double lr_at_epoch(const FitConfig& cfg, int epoch);

// Full optimization starting from explicit parameters (noise is materialized
// from cfg.seed if absent, so every loss evaluation sees the same braid).
FitTrace fit_from(const BraidParams& start, const StrandSet& coarse_braid,
                  const GrayImage& real_edges, const LossWeights& weights, const FitConfig& cfg);

// initialize + fit_from.
FitTrace fit(const StrandSet& coarse_braid, const GrayImage& real_edges,
             const MidLineAnnotation& midline, const LossWeights& weights, const FitConfig& cfg);

// Replace the radius profile by its window-9 moving average (ends clamped).
// Never increases the profile's total variation.
SyntheticBraid adjust_radius(const SyntheticBraid& braid);

}  // namespace braidrec
