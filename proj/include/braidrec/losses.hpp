#pragma once

#include <span>
#include <vector>

#include "braidrec/braid.hpp"
#include "braidrec/types.hpp"

namespace braidrec {

struct LossWeights {
  double lambda_pc = 1.0;     // point-cloud term weight (1 per the total-loss form;
                              // settable to 0 only for ablations)
  double lambda_proj = 1e-4;  // projection term weight
  double lambda_reg = 1e-3;   // regularization term weight
  double lambda_reg_b = 1.0;  // weight of the |b - anchor| penalty inside the regularizer
  double b_anchor = 10.0;     // anchor value for the depth amplitude
  double bce_epsilon = 1e-7;  // log clamping, in (0, 0.5)

  void validate() const {
    if (!(lambda_pc >= 0.0 && lambda_proj >= 0.0 && lambda_reg >= 0.0 && lambda_reg_b >= 0.0)) {
      throw ValidationError("invalid-weights", "loss weights must be >= 0");
    }
    if (!(bce_epsilon > 0.0 && bce_epsilon < 0.5)) {
      throw ValidationError("invalid-weights", "bce_epsilon must lie in (0, 0.5)");
    }
  }
};

struct LossReport {
  double l_pc = 0.0;
  double l_proj = 0.0;
  double l_reg = 0.0;
  double l_total = 0.0;
};

// Symmetric Chamfer distance between the points of two strand sets (strand
// identity ignored): mean nearest-neighbor distance S1->S2 plus S2->S1.
// Grid-accelerated; matches a brute-force scan exactly.
double chamfer(const StrandSet& s1, const StrandSet& s2);

// Pixel-wise binary cross-entropy of the synthetic edge image against the real
// one; synth values are clamped to [eps, 1-eps] before the logs.
double projection_bce(const GrayImage& real_edges, const GrayImage& synth_edges, double eps);

// Sample standard deviation of the forward-difference derivative of z
// (divisor N-2 over the N-1 derivative samples) plus lambda * |b - b_anchor|.
double depth_regularizer(std::span<const double> z, double delta_t, double b, double lambda,
                         double b_anchor = 10.0);

// Weighted total over all three terms; the regularizer is summed over the
// braid's bunch centerlines. l_total = lambda_pc*l_pc + lambda_proj*l_proj +
// lambda_reg*l_reg (lambda_pc is 1 by default).
LossReport total(const StrandSet& s1, const StrandSet& s2, const GrayImage& real_edges,
                 const GrayImage& synth_edges, const std::vector<std::vector<double>>& z_per_bunch,
                 const BraidParams& params, const LossWeights& weights);

}  // namespace braidrec
