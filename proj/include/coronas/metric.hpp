#pragma once

#include <deque>
#include <optional>
#include <unordered_map>
#include <vector>

#include "coronas/complex.hpp"
#include "coronas/flags.hpp"

namespace coronas {

// Distance threshold: consecutive tiles of a sequence must intersect in a
// face of dimension at least l. The default choice is l = d-2.
inline int default_threshold(int dim) { return dim - 2 < 0 ? 0 : dim - 2; }

// Facets of the patch incident to `f`: the facets containing f for proper
// faces, and f's own facets when f is a tile.
inline std::vector<FaceId> incident_facets(const RankedComplex& c, FaceId f) {
  const int d = c.dim();
  std::vector<FaceId> out;
  const Face& face = c.face(f);
  if (face.rank == d) {
    out = face.boundary;
    return out;
  }
  for (FaceId t : face.star_tiles)
    for (FaceId h : c.face(t).boundary)
      if (c.contains(h, f)) out.push_back(h);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Closure rule: a face is closed when every incident facet lies in exactly
// two patch tiles. For convex tiles this means the patch star of the face
// covers a neighborhood of its relative interior, i.e. the star is complete.
inline bool is_closed_face(const RankedComplex& c, FaceId f) {
  for (FaceId h : incident_facets(c, f))
    if (c.tile_multiplicity(h) != 2) return false;
  return true;
}

inline bool is_boundary_face(const RankedComplex& c, FaceId f) {
  for (FaceId h : incident_facets(c, f))
    if (c.tile_multiplicity(h) == 1) return true;
  return false;
}

// A tile is neighbor-complete at threshold l when every face of it of rank
// >= l is closed; all tiles of the surrounding tiling that meet such a tile
// in a face of rank >= l are then present in the patch.
inline bool neighbor_complete(const RankedComplex& c, FaceId tile, int l) {
  for (FaceId f : c.face(tile).closure) {
    if (c.face(f).rank < l || c.face(f).rank == c.dim()) continue;
    if (!is_closed_face(c, f)) return false;
  }
  return true;
}

// Breadth-first distances from `from` to every tile, at threshold l.
inline std::unordered_map<FaceId, int> tile_distances(const RankedComplex& c, FaceId from,
                                                      int l, int cutoff = -1) {
  std::unordered_map<FaceId, int> dist;
  dist.emplace(from, 0);
  std::deque<FaceId> queue{from};
  while (!queue.empty()) {
    FaceId t = queue.front();
    queue.pop_front();
    int dt = dist.at(t);
    if (cutoff >= 0 && dt == cutoff) continue;
    for (FaceId n : c.neighbors(t, l))
      if (dist.emplace(n, dt + 1).second) queue.push_back(n);
  }
  return dist;
}

// Minimum length of a tile sequence from P to Q with consecutive
// intersections of dimension >= l; nullopt when unreachable in the patch.
inline std::optional<int> tile_distance(const RankedComplex& c, FaceId p, FaceId q, int l) {
  if (c.face(p).rank != c.dim() || c.face(q).rank != c.dim())
    throw std::invalid_argument("tile_distance: arguments must be tiles");
  if (p == q) return 0;
  std::unordered_map<FaceId, int> dist;
  dist.emplace(p, 0);
  std::deque<FaceId> queue{p};
  while (!queue.empty()) {
    FaceId t = queue.front();
    queue.pop_front();
    int dt = dist.at(t);
    for (FaceId n : c.neighbors(t, l)) {
      if (!dist.emplace(n, dt + 1).second) continue;
      if (n == q) return dt + 1;
      queue.push_back(n);
    }
  }
  return std::nullopt;
}

// A centered corona: the subcomplex of all faces of tiles within distance k
// of the center, together with the center and the per-tile distance rings.
// Ring values are patch distances; for tiles of the corona they agree with
// distances measured inside the corona complex itself.
struct CenteredCorona {
  FaceId center = 0;
  int level = 0;
  int threshold = 0;
  RankedComplex complex;
  std::unordered_map<FaceId, int> ring;  // tile -> distance from center

  std::vector<FaceId> ring_tiles(int j) const {
    std::vector<FaceId> out;
    for (const auto& [t, r] : ring)
      if (r == j) out.push_back(t);
    std::sort(out.begin(), out.end());
    return out;
  }
};

inline CenteredCorona corona(const RankedComplex& c, FaceId center, int k, int l) {
  if (c.face(center).rank != c.dim())
    throw std::invalid_argument("corona: center must be a tile");
  if (k < 0 || l < 0 || l > c.dim() - 1)
    throw std::invalid_argument("corona: bad level or threshold");
  CenteredCorona out;
  out.center = center;
  out.level = k;
  out.threshold = l;
  out.ring = tile_distances(c, center, l, k);
  std::vector<FaceId> keep;
  for (const auto& [t, r] : out.ring)
    keep.insert(keep.end(), c.face(t).closure.begin(), c.face(t).closure.end());
  out.complex = c.restricted(keep);
  return out;
}

// The level-j sub-corona of an already extracted corona, j <= its level.
// Ring values are reused, so no access to the parent patch is needed.
inline CenteredCorona sub_corona(const CenteredCorona& c, int j) {
  if (j > c.level) throw std::invalid_argument("sub_corona: level exceeds corona level");
  CenteredCorona out;
  out.center = c.center;
  out.level = j;
  out.threshold = c.threshold;
  std::vector<FaceId> keep;
  for (const auto& [t, r] : c.ring) {
    if (r > j) continue;
    out.ring.emplace(t, r);
    keep.insert(keep.end(), c.complex.face(t).closure.begin(), c.complex.face(t).closure.end());
  }
  out.complex = c.complex.restricted(keep);
  return out;
}

// True when the k-corona of `center` computed in this patch equals its
// corona in any face-to-face extension of the patch: every tile within
// distance k-1 must be neighbor-complete at threshold l.
inline bool is_corona_exact(const RankedComplex& c, FaceId center, int k, int l) {
  if (k == 0) return true;
  auto dist = tile_distances(c, center, l, k - 1);
  for (const auto& [t, r] : dist) {
    if (r > k - 1) continue;
    if (!neighbor_complete(c, t, l)) return false;
  }
  return true;
}

// All tiles whose k-coronas are exact in the patch; the maximal sound core.
inline std::vector<FaceId> exact_tiles(const RankedComplex& c, int k, int l) {
  std::vector<FaceId> out;
  for (FaceId t : c.tiles())
    if (is_corona_exact(c, t, k, l)) out.push_back(t);
  return out;
}

}  // namespace coronas
