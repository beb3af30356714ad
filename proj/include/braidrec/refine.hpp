#pragma once

#include <map>
#include <string>
#include <vector>

#include "braidrec/braid.hpp"
#include "braidrec/raster.hpp"
#include "braidrec/types.hpp"

namespace braidrec {

struct RefineConfig {
  double inclusion_factor = 1.2;  // > 1, times the tube radius
  int downsample_keep_every = 2;  // >= 1
  int smooth_window = 5;          // odd >= 1; 1 disables smoothing
  bool balance = true;
  double mask_threshold = 0.5;  // fraction of projected points that must hit the mask

  void validate() const {
    if (!(inclusion_factor > 1.0)) {
      throw ValidationError("invalid-refine-config", "inclusion_factor must be > 1");
    }
    if (downsample_keep_every < 1) {
      throw ValidationError("invalid-refine-config", "downsample_keep_every must be >= 1");
    }
    if (smooth_window < 1 || smooth_window % 2 == 0) {
      throw ValidationError("invalid-refine-config", "smooth_window must be odd and >= 1");
    }
    if (!(mask_threshold >= 0.0 && mask_threshold <= 1.0)) {
      throw ValidationError("invalid-refine-config", "mask_threshold must lie in [0, 1]");
    }
  }
};

// Where each braid-region strand went: a bunch index, or rejected (too far
// from every centerline). Every input strand appears in exactly one place.
struct Allocation {
  std::map<std::string, int> bunch_of;
  std::vector<std::string> rejected;  // sorted by id
};

// Assign strands to bunches by the proximity of their top (smallest-y) point;
// strands farther than inclusion_factor * radius from every centerline are
// rejected. With balancing on, bunch sizes end up within 1 of each other.
Allocation allocate(const StrandSet& coarse_braid, const SyntheticBraid& braid,
                    const RefineConfig& cfg);

// Pull every point that strays beyond the local tube radius radially back onto
// the tube surface of the given bunch. Point counts and order are preserved.
StrandSet reconstruct_bunch(const StrandSet& strands, const SyntheticBraid& braid, int bunch);

// Swap allocated originals for their reconstructed versions; any leftover tail
// points are re-appended, translated so the junction stays continuous.
// Unallocated strands pass through untouched.
StrandSet replace_and_attach(const StrandSet& original, const StrandSet& reconstructed,
                             const Allocation& allocation);

// Keep every k-th point (first and last always), then apply a centered moving
// average per coordinate; windows shrink symmetrically near the ends so
// endpoints stay fixed and straight strands stay straight.
StrandSet downsample_smooth(const StrandSet& strands, const RefineConfig& cfg);

// Full pipeline: mask partition -> allocate -> per-bunch reconstruction of the
// braid-region portion of each strand -> tail re-attachment -> downsample and
// smooth everything. Strand ids are conserved.
StrandSet refine_all(const StrandSet& coarse_full, const GrayImage& mask,
                     const SyntheticBraid& braid, const RefineConfig& cfg,
                     const ProjectionSpec& spec);

}  // namespace braidrec
