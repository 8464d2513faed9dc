#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "coronas/complex.hpp"
#include "coronas/metric.hpp"

namespace coronas {

enum class ViolationKind {
  BoundaryRank,     // boundary of a rank-j face is not all rank j-1
  EmptyBoundary,    // rank >= 1 face with no boundary
  OrphanFace,       // face lies in no tile's closure
  DiamondProperty,  // an interval of length two without exactly two middle faces
  NotFaceToFace,    // facet in >= 3 tiles, or tile pair without a common face
  DuplicateFace,    // two faces of equal rank share the same vertex set
};

inline const char* violation_name(ViolationKind k) {
  switch (k) {
    case ViolationKind::BoundaryRank: return "BoundaryRank";
    case ViolationKind::EmptyBoundary: return "EmptyBoundary";
    case ViolationKind::OrphanFace: return "OrphanFace";
    case ViolationKind::DiamondProperty: return "DiamondProperty";
    case ViolationKind::NotFaceToFace: return "NotFaceToFace";
    case ViolationKind::DuplicateFace: return "DuplicateFace";
  }
  return "?";
}

struct Violation {
  ViolationKind kind;
  std::vector<FaceId> faces;
  std::string detail;
};

// Everything validate() learns about a patch: the violated invariants, plus
// the boundary/closed classification of faces and the set of tiles whose
// whole star is present in the patch.
struct ValidationReport {
  std::vector<Violation> violations;
  std::vector<FaceId> boundary_faces;  // some incident facet lies in one tile
  std::vector<FaceId> closed_faces;    // every incident facet lies in two tiles
  std::vector<FaceId> interior_tiles;  // neighbor-complete at l = 0

  bool ok() const { return violations.empty(); }
};

// Checks that the patch is a legal fragment of a locally finite face-to-face
// tiling by convex polytopes. Problems are reported, never thrown.
inline ValidationReport validate(const RankedComplex& c) {
  ValidationReport rep;
  const int d = c.dim();

  for (const Face& f : c.all_faces()) {
    if (f.rank >= 1 && f.boundary.empty())
      rep.violations.push_back({ViolationKind::EmptyBoundary, {f.id}, "no boundary faces"});
    for (FaceId b : f.boundary)
      if (c.face(b).rank != f.rank - 1)
        rep.violations.push_back({ViolationKind::BoundaryRank,
                                  {f.id, b},
                                  "boundary face of rank " + std::to_string(c.face(b).rank)});
    if (f.star_tiles.empty())
      rep.violations.push_back({ViolationKind::OrphanFace, {f.id}, "not in any tile"});
  }

  // Duplicate vertex sets break face identification.
  {
    std::unordered_map<std::vector<FaceId>, FaceId, FaceIdVectorHash> seen;
    for (const Face& f : c.all_faces()) {
      auto [it, fresh] = seen.emplace(f.vertices, f.id);
      if (!fresh)
        rep.violations.push_back(
            {ViolationKind::DuplicateFace, {it->second, f.id}, "equal vertex sets"});
    }
  }

  // Diamond property inside face lattices: for F < G with two ranks between
  // there are exactly two faces strictly in between. The top diamond (around
  // facets) is the face-to-face check below; patch boundaries may truncate it.
  for (const Face& g : c.all_faces()) {
    if (g.rank < 2) continue;
    std::unordered_map<FaceId, int> between;
    for (FaceId x : g.boundary)
      for (FaceId f2 : c.face(x).boundary) ++between[f2];
    for (const auto& [f2, count] : between)
      if (count != 2)
        rep.violations.push_back({ViolationKind::DiamondProperty,
                                  {f2, g.id},
                                  std::to_string(count) + " faces strictly between"});
  }

  for (FaceId h : c.faces_of_rank(d - 1))
    if (c.tile_multiplicity(h) > 2)
      rep.violations.push_back({ViolationKind::NotFaceToFace,
                                {h},
                                "facet lies in " + std::to_string(c.tile_multiplicity(h)) +
                                    " tiles"});

  // Pairwise tile meets; only pairs sharing at least one vertex can fail.
  {
    std::vector<std::pair<FaceId, FaceId>> pairs;
    for (FaceId v : c.faces_of_rank(0)) {
      const auto& ts = c.face(v).star_tiles;
      for (std::size_t i = 0; i < ts.size(); ++i)
        for (std::size_t j = i + 1; j < ts.size(); ++j) pairs.emplace_back(ts[i], ts[j]);
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    for (auto [p, q] : pairs) {
      try {
        (void)c.meet(p, q);
      } catch (const NotFaceToFace& e) {
        rep.violations.push_back({ViolationKind::NotFaceToFace, {p, q}, e.what()});
      }
    }
  }

  for (const Face& f : c.all_faces()) {
    if (is_boundary_face(c, f.id)) rep.boundary_faces.push_back(f.id);
    if (is_closed_face(c, f.id)) rep.closed_faces.push_back(f.id);
  }
  for (FaceId t : c.tiles())
    if (neighbor_complete(c, t, 0)) rep.interior_tiles.push_back(t);

  return rep;
}

}  // namespace coronas
