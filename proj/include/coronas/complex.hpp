#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "coronas/errors.hpp"

namespace coronas {

// One face of a ranked complex. `boundary` holds the faces one rank below;
// everything else is derived once at construction and read-only afterwards.
struct Face {
  FaceId id = 0;
  int rank = 0;
  std::vector<FaceId> boundary;    // sorted, rank-1 faces (as given)
  std::vector<FaceId> coboundary;  // sorted, rank+1 faces
  std::vector<FaceId> vertices;    // sorted rank-0 ids of the closure
  std::vector<FaceId> closure;     // sorted ids of the full downward closure, incl. self
  std::vector<FaceId> star_tiles;  // sorted tile ids whose closure contains this face
};

struct FaceSpec {
  FaceId id;
  int rank;
  std::vector<FaceId> boundary;
};

struct FaceIdVectorHash {
  std::size_t operator()(const std::vector<FaceId>& v) const {
    std::size_t h = 1469598103934665603ull;
    for (FaceId x : v) {
      h ^= x;
      h *= 1099511628211ull;
    }
    return h;
  }
};

// A finite patch of a face-to-face tiling, stored as a graded boundary
// structure with tiles at rank d. Immutable after construction; every
// analysis in this library is a pure read, so complexes can be shared
// freely across threads.
//
// Ids are preserved under restriction, so faces of a subcomplex carry the
// ids they had in the parent patch.
class RankedComplex {
public:
  RankedComplex() = default;

  static RankedComplex build(int dim, std::vector<FaceSpec> specs) {
    if (dim < 1) throw std::invalid_argument("complex dimension must be >= 1");
    RankedComplex c;
    c.dim_ = dim;
    std::sort(specs.begin(), specs.end(),
              [](const FaceSpec& a, const FaceSpec& b) { return a.id < b.id; });
    FaceId max_id = 0;
    for (const FaceSpec& s : specs) max_id = std::max(max_id, s.id);
    c.pos_.assign(specs.empty() ? 0 : max_id + 1, -1);
    c.faces_.reserve(specs.size());
    for (FaceSpec& s : specs) {
      if (s.rank < 0 || s.rank > dim)
        throw std::invalid_argument("face rank out of range: face " + std::to_string(s.id));
      if (c.pos_[s.id] != -1)
        throw std::invalid_argument("duplicate face id " + std::to_string(s.id));
      c.pos_[s.id] = static_cast<std::int32_t>(c.faces_.size());
      Face f;
      f.id = s.id;
      f.rank = s.rank;
      f.boundary = std::move(s.boundary);
      std::sort(f.boundary.begin(), f.boundary.end());
      f.boundary.erase(std::unique(f.boundary.begin(), f.boundary.end()), f.boundary.end());
      c.faces_.push_back(std::move(f));
    }
    for (const Face& f : c.faces_)
      for (FaceId b : f.boundary) {
        if (!c.has(b))
          throw std::invalid_argument("face " + std::to_string(f.id) +
                                      " references absent face " + std::to_string(b));
        if (c.face(b).rank >= f.rank)
          throw std::invalid_argument("face " + std::to_string(f.id) +
                                      " has boundary of rank >= its own");
      }
    c.finish();
    return c;
  }

  int dim() const { return dim_; }
  std::size_t face_count() const { return faces_.size(); }

  bool has(FaceId id) const {
    return id < pos_.size() && pos_[id] != -1;
  }
  const Face& face(FaceId id) const {
    if (!has(id)) throw std::out_of_range("no face with id " + std::to_string(id));
    return faces_[static_cast<std::size_t>(pos_[id])];
  }

  const std::vector<FaceId>& faces_of_rank(int r) const { return by_rank_[static_cast<std::size_t>(r)]; }
  const std::vector<FaceId>& tiles() const { return by_rank_[static_cast<std::size_t>(dim_)]; }
  const std::vector<Face>& all_faces() const { return faces_; }

  bool contains(FaceId f, FaceId sub) const {
    const auto& cl = face(f).closure;
    return std::binary_search(cl.begin(), cl.end(), sub);
  }

  // Face with exactly this (sorted) vertex set, if any.
  std::optional<FaceId> face_with_vertices(const std::vector<FaceId>& verts) const {
    auto it = vertex_index_.find(verts);
    if (it == vertex_index_.end()) return std::nullopt;
    return it->second;
  }

  // Maximal common face of f and g, identified by vertex sets. Empty
  // intersection yields nullopt; a nonempty intersection that is not a
  // common face of both is a face-to-face violation.
  std::optional<FaceId> meet(FaceId f, FaceId g) const {
    const Face& a = face(f);
    const Face& b = face(g);
    std::vector<FaceId> common;
    std::set_intersection(a.vertices.begin(), a.vertices.end(), b.vertices.begin(),
                          b.vertices.end(), std::back_inserter(common));
    if (common.empty()) return std::nullopt;
    auto m = face_with_vertices(common);
    if (!m || !contains(f, *m) || !contains(g, *m))
      throw NotFaceToFace(f, g, "common vertex set matches no shared face");
    return *m;
  }

  // Number of patch tiles whose closure contains `id`.
  std::size_t tile_multiplicity(FaceId id) const { return face(id).star_tiles.size(); }

  // Tiles sharing a face of rank >= l with `tile`, excluding the tile itself.
  std::vector<FaceId> neighbors(FaceId tile, int l) const {
    std::vector<FaceId> out;
    for (FaceId f : face(tile).closure) {
      if (face(f).rank < l) continue;
      for (FaceId t : face(f).star_tiles)
        if (t != tile) out.push_back(t);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  // Induced subcomplex on a boundary-closed face set; ids are preserved.
  RankedComplex restricted(const std::vector<FaceId>& ids) const {
    std::vector<FaceId> keep(ids);
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
    auto kept = [&](FaceId x) { return std::binary_search(keep.begin(), keep.end(), x); };
    std::vector<FaceSpec> specs;
    specs.reserve(keep.size());
    for (FaceId id : keep) {
      const Face& f = face(id);
      for (FaceId b : f.boundary)
        if (!kept(b)) throw NotClosed(id, b);
      specs.push_back({id, f.rank, f.boundary});
    }
    return build(dim_, std::move(specs));
  }

private:
  void finish() {
    by_rank_.assign(static_cast<std::size_t>(dim_) + 1, {});
    for (const Face& f : faces_) by_rank_[static_cast<std::size_t>(f.rank)].push_back(f.id);

    for (const Face& f : faces_)
      for (FaceId b : f.boundary) {
        Face& bf = faces_[static_cast<std::size_t>(pos_[b])];
        bf.coboundary.push_back(f.id);
      }
    for (Face& f : faces_) std::sort(f.coboundary.begin(), f.coboundary.end());

    // Closures and vertex sets, bottom-up (boundary ranks are strictly lower).
    std::vector<FaceId> order;
    order.reserve(faces_.size());
    for (int r = 0; r <= dim_; ++r)
      for (FaceId id : by_rank_[static_cast<std::size_t>(r)]) order.push_back(id);
    for (FaceId id : order) {
      Face& f = faces_[static_cast<std::size_t>(pos_[id])];
      if (f.rank == 0) {
        f.vertices = {id};
        f.closure = {id};
        continue;
      }
      std::vector<FaceId> cl{id};
      std::vector<FaceId> vs;
      for (FaceId b : f.boundary) {
        const Face& bf = face(b);
        cl.insert(cl.end(), bf.closure.begin(), bf.closure.end());
        vs.insert(vs.end(), bf.vertices.begin(), bf.vertices.end());
      }
      std::sort(cl.begin(), cl.end());
      cl.erase(std::unique(cl.begin(), cl.end()), cl.end());
      std::sort(vs.begin(), vs.end());
      vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
      f.closure = std::move(cl);
      f.vertices = std::move(vs);
    }

    for (FaceId t : tiles())
      for (FaceId sub : face(t).closure)
        faces_[static_cast<std::size_t>(pos_[sub])].star_tiles.push_back(t);
    // Tile order is ascending already; star_tiles stays sorted.

    vertex_index_.reserve(faces_.size());
    for (const Face& f : faces_) vertex_index_.emplace(f.vertices, f.id);
  }

  int dim_ = 0;
  std::vector<Face> faces_;          // ascending by id
  std::vector<std::int32_t> pos_;    // id -> index into faces_, -1 if absent
  std::vector<std::vector<FaceId>> by_rank_;
  std::unordered_map<std::vector<FaceId>, FaceId, FaceIdVectorHash> vertex_index_;
};

}  // namespace coronas
