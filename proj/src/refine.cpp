#include "braidrec/refine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace braidrec {

namespace {

const Point3& top_point(const Strand& s) {
  const auto& pts = s.points();
  std::size_t best = 0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (pts[i].y < pts[best].y) best = i;
  }
  return pts[best];
}

// Minimum distance from any strand point to the bunch's centerline points.
double strand_bunch_distance(const Strand& s, const SyntheticBraid& braid, int bunch) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : s.points()) {
    best = std::min(best, centerline_distance(p, braid, bunch).first);
  }
  return best;
}

}  // namespace

Allocation allocate(const StrandSet& coarse_braid, const SyntheticBraid& braid,
                    const RefineConfig& cfg) {
  cfg.validate();
  const int nb = braid.n_bunches();
  const double cutoff = cfg.inclusion_factor * braid.params().radius;

  Allocation alloc;
  // Distances from each allocated strand's top point to every bunch, kept for
  // the balancing pass.
  std::map<std::string, std::vector<double>> top_dist;
  std::vector<int> sizes(nb, 0);

  for (const auto& s : coarse_braid.strands()) {
    double closest = std::numeric_limits<double>::infinity();
    for (int b = 0; b < nb; ++b) {
      closest = std::min(closest, strand_bunch_distance(s, braid, b));
    }
    if (closest > cutoff) {
      alloc.rejected.push_back(s.id());
      continue;
    }
    const Point3& top = top_point(s);
    std::vector<double> d(nb);
    int best = 0;
    for (int b = 0; b < nb; ++b) {
      d[b] = centerline_distance(top, braid, b).first;
      if (d[b] < d[best]) best = b;
    }
    alloc.bunch_of[s.id()] = best;
    top_dist[s.id()] = std::move(d);
    ++sizes[best];
  }
  std::sort(alloc.rejected.begin(), alloc.rejected.end());

  if (cfg.balance) {
    // Move the least-committed strand from the fullest bunch to the emptiest
    // until sizes agree to within 1.
    for (;;) {
      int bmax = 0, bmin = 0;
      for (int b = 1; b < nb; ++b) {
        if (sizes[b] > sizes[bmax]) bmax = b;
        if (sizes[b] < sizes[bmin]) bmin = b;
      }
      if (sizes[bmax] - sizes[bmin] <= 1) break;
      std::string pick;
      double pick_margin = std::numeric_limits<double>::infinity();
      for (const auto& [id, b] : alloc.bunch_of) {
        if (b != bmax) continue;
        const auto& d = top_dist[id];
        const double margin = d[bmin] - d[bmax];
        if (margin < pick_margin || (margin == pick_margin && id < pick)) {
          pick_margin = margin;
          pick = id;
        }
      }
      alloc.bunch_of[pick] = bmin;
      --sizes[bmax];
      ++sizes[bmin];
    }
  }
  return alloc;
}

StrandSet reconstruct_bunch(const StrandSet& strands, const SyntheticBraid& braid, int bunch) {
  if (bunch < 0 || bunch >= braid.n_bunches()) {
    throw ValidationError("bad-bunch-index", "bunch index out of range");
  }
  const auto& centerline = braid.centerlines()[bunch].points();
  const auto& profile = braid.radius_profile()[bunch];

  std::vector<Strand> out;
  out.reserve(strands.size());
  for (const auto& s : strands.strands()) {
    std::vector<Point3> pts;
    pts.reserve(s.size());
    for (const auto& p : s.points()) {
      const auto [d, idx] = centerline_distance(p, braid, bunch);
      const double r = profile[idx];
      if (d > r && d > 0.0) {
        const Point3& c = centerline[idx];
        pts.push_back(c + (r / d) * (p - c));
      } else {
        pts.push_back(p);
      }
    }
    out.emplace_back(s.id(), std::move(pts));
  }
  return StrandSet(std::move(out));
}

StrandSet replace_and_attach(const StrandSet& original, const StrandSet& reconstructed,
                             const Allocation& allocation) {
  if (reconstructed.size() != allocation.bunch_of.size()) {
    throw ValidationError("id-mismatch",
                          "reconstructed set must cover exactly the allocated strands");
  }
  for (const auto& r : reconstructed.strands()) {
    if (allocation.bunch_of.find(r.id()) == allocation.bunch_of.end()) {
      throw ValidationError("id-mismatch", "reconstructed strand was never allocated: " + r.id());
    }
  }

  std::vector<Strand> out;
  out.reserve(original.size());
  for (const auto& s : original.strands()) {
    if (allocation.bunch_of.find(s.id()) == allocation.bunch_of.end()) {
      out.push_back(s);
      continue;
    }
    const Strand* rec = reconstructed.find(s.id());
    if (rec == nullptr) {
      throw ValidationError("id-mismatch", "allocated strand missing from reconstruction: " + s.id());
    }
    const auto& orig_pts = s.points();
    const auto& rec_pts = rec->points();
    if (rec_pts.size() > orig_pts.size()) {
      throw ValidationError("bad-reconstruction", "reconstructed strand longer than original");
    }
    std::vector<Point3> pts = rec_pts;
    if (rec_pts.size() < orig_pts.size()) {
      // Translate the leftover tail so it picks up exactly where the
      // reconstructed portion ends.
      const Point3 shift = rec_pts.back() - orig_pts[rec_pts.size() - 1];
      for (std::size_t i = rec_pts.size(); i < orig_pts.size(); ++i) {
        pts.push_back(orig_pts[i] + shift);
      }
    }
    out.emplace_back(s.id(), std::move(pts));
  }
  return StrandSet(std::move(out));
}

namespace {

std::vector<Point3> downsample_points(const std::vector<Point3>& pts, int k) {
  std::vector<Point3> out;
  for (std::size_t i = 0; i < pts.size(); i += static_cast<std::size_t>(k)) {
    out.push_back(pts[i]);
  }
  if ((pts.size() - 1) % static_cast<std::size_t>(k) != 0) {
    out.push_back(pts.back());
  }
  return out;
}

std::vector<Point3> smooth_points(const std::vector<Point3>& pts, int window) {
  if (window <= 1) return pts;
  const int n = static_cast<int>(pts.size());
  const int h = window / 2;
  std::vector<Point3> out;
  out.reserve(pts.size());
  for (int i = 0; i < n; ++i) {
    const int he = std::min({h, i, n - 1 - i});  // symmetric shrink keeps lines straight
    Point3 sum{0.0, 0.0, 0.0};
    for (int j = i - he; j <= i + he; ++j) sum = sum + pts[j];
    out.push_back((1.0 / (2 * he + 1)) * sum);
  }
  return out;
}

// Drop exact consecutive duplicates; nullopt when fewer than 2 points remain.
std::optional<std::vector<Point3>> sanitized(const std::vector<Point3>& pts) {
  std::vector<Point3> out;
  out.reserve(pts.size());
  for (const auto& p : pts) {
    if (out.empty() || !(out.back() == p)) out.push_back(p);
  }
  if (out.size() < 2) return std::nullopt;
  return out;
}

}  // namespace

StrandSet downsample_smooth(const StrandSet& strands, const RefineConfig& cfg) {
  cfg.validate();
  std::vector<Strand> out;
  out.reserve(strands.size());
  for (const auto& s : strands.strands()) {
    const auto down = downsample_points(s.points(), cfg.downsample_keep_every);
    const auto smoothed = smooth_points(down, cfg.smooth_window);
    // Smoothing can merge points on degenerate zig-zags; fall back rather
    // than emit an invalid strand.
    if (auto pts = sanitized(smoothed)) {
      out.emplace_back(s.id(), std::move(*pts));
    } else if (auto pts2 = sanitized(down)) {
      out.emplace_back(s.id(), std::move(*pts2));
    } else {
      out.push_back(s);
    }
  }
  return StrandSet(std::move(out));
}

StrandSet refine_all(const StrandSet& coarse_full, const GrayImage& mask,
                     const SyntheticBraid& braid, const RefineConfig& cfg,
                     const ProjectionSpec& spec) {
  cfg.validate();
  auto [braid_region, rest] = mask_strands(coarse_full, mask, spec, cfg.mask_threshold);
  (void)rest;
  if (braid_region.empty()) {
    return downsample_smooth(coarse_full, cfg);
  }

  const Allocation alloc = allocate(braid_region, braid, cfg);

  // Per allocated strand, reconstruct only the braid-region portion: the tail
  // hanging below the last centerline point is re-attached afterwards.
  std::vector<std::vector<Strand>> heads(braid.n_bunches());
  for (const auto& s : coarse_full.strands()) {
    const auto it = alloc.bunch_of.find(s.id());
    if (it == alloc.bunch_of.end()) continue;
    const int bunch = it->second;
    const double y_end = braid.centerlines()[bunch].points().back().y;
    const auto& pts = s.points();
    std::size_t head_len = pts.size();
    while (head_len > 0 && pts[head_len - 1].y > y_end) --head_len;
    if (head_len < 2) head_len = pts.size();  // barely inside: treat whole strand as head
    heads[bunch].emplace_back(s.id(),
                              std::vector<Point3>(pts.begin(), pts.begin() + head_len));
  }

  std::vector<Strand> reconstructed;
  for (int b = 0; b < braid.n_bunches(); ++b) {
    if (heads[b].empty()) continue;
    const StrandSet rec = reconstruct_bunch(StrandSet(std::move(heads[b])), braid, b);
    for (const auto& r : rec.strands()) reconstructed.push_back(r);
  }

  const StrandSet replaced =
      replace_and_attach(coarse_full, StrandSet(std::move(reconstructed)), alloc);
  return downsample_smooth(replaced, cfg);
}

}  // namespace braidrec
