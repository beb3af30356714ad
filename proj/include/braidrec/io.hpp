#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "braidrec/braid.hpp"
#include "braidrec/raster.hpp"
#include "braidrec/refine.hpp"
#include "braidrec/types.hpp"

namespace braidrec {

// Strand text format:
//   STRANDS <n>
//   S <id> <k>
//   <x> <y> <z>        (k lines)
// Round-trips to 1e-6 per coordinate.
StrandSet load_strands(const std::string& path);
void save_strands(const StrandSet& set, const std::string& path);

// Annotation text format:
//   MIDLINE <point-count> width_px=<w>
//   <x> <y>             (point-count lines)
MidLineAnnotation load_annotation(const std::string& path);
void save_annotation(const MidLineAnnotation& midline, const std::string& path);

// 8-bit grayscale PNG or PGM (P2/P5); pixel v reads as v/255.
GrayImage load_mask(const std::string& path);
// Binary PGM (P5); values rounded to 0..255.
void save_pgm(const GrayImage& image, const std::string& path);

// ASCII PLY point cloud. With an allocation, vertices take their strand's
// bunch color: 0 red, 1 blue, 2 green; unallocated strands are gray.
void export_ply(const StrandSet& set, const std::optional<Allocation>& color_by_bunch,
                const std::string& path);

// Flat key=value parameter file, full precision; includes the per-point shift
// vectors and materialized bunch noise so a fitted braid can be regenerated.
BraidParams load_params(const std::string& path);
void save_params(const BraidParams& params, const std::string& path);

struct SimulatedCoarse {
  StrandSet strands;
  GrayImage mask;
  GrayImage edges;
};

// Deterministic test-data generator: strands sampled on the ground-truth tube
// surface with isotropic Gaussian jitter, plus the matching binary mask and
// soft edge image.
SimulatedCoarse simulate_coarse(const BraidParams& truth, double noise_sigma,
                                int strands_per_bunch, std::uint64_t seed,
                                const ProjectionSpec& spec);

}  // namespace braidrec
