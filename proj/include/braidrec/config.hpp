#pragma once

#include <cstdint>
#include <string>

#include "braidrec/braid.hpp"
#include "braidrec/fit.hpp"
#include "braidrec/losses.hpp"
#include "braidrec/raster.hpp"
#include "braidrec/refine.hpp"

namespace braidrec {

// Everything a CLI run needs, as a flat key=value config. Every key has a
// default; unknown keys are rejected by name.
struct RunConfig {
  std::string in_strands;
  std::string out_strands;
  std::string in_mask;
  std::string in_edges;
  std::string in_annotation;
  std::string in_params;
  std::string out_params;
  std::string out_trace;
  std::string out_ply;
  std::string out_mask;
  std::string out_edges;
  std::string out_annotation;

  std::string edge_source = "file";  // "file": in_edges used as-is; "canny": run the detector on it

  ProjectionSpec proj;
  LossWeights weights;
  FitConfig fit;
  RefineConfig refine;
  CannyConfig canny;
  BraidParams braid;  // ground-truth/synthesis parameters for synth & simulate
  double braid_shift_x0 = 0.0;  // constant x offset applied when braid.shift_x is empty
  std::uint64_t braid_seed = 0;

  // braid with the constant x shift materialized (length n_points).
  BraidParams synthesis_params() const;

  double sim_noise_sigma = 0.5;
  int sim_strands_per_bunch = 15;
  std::uint64_t sim_seed = 1;

  void validate() const;
};

// Parse one key=value setting; throws ValidationError("unknown-config-key")
// naming the key, or ParseError for a malformed value.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value,
                   long line = 0);

// Load key=value lines ('#' comments, blank lines ignored).
RunConfig load_config(const std::string& path);

// Every known key with its default value, one per line (documentation aid).
std::string default_config_text();

}  // namespace braidrec
