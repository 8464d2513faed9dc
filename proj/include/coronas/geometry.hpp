#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "coronas/iso.hpp"
#include "coronas/local_theorem.hpp"
#include "coronas/metric.hpp"
#include "coronas/rational.hpp"

namespace coronas {

// A 2D patch with exact rational vertex coordinates. Congruence decisions
// compare squared distances only, which are rational for rational points, so
// nothing here ever touches floating point.
struct GeoTiling {
  RankedComplex complex;
  std::unordered_map<FaceId, RationalPoint> coords;

  const RationalPoint& point(FaceId v) const { return coords.at(v); }
};

struct GeoViolation {
  std::string what;
  std::vector<FaceId> faces;
};

// Orders the vertices of a 2D tile along its edge cycle; empty result means
// the tile's edges do not form a single cycle.
inline std::vector<FaceId> tile_vertex_cycle(const RankedComplex& c, FaceId tile) {
  const Face& t = c.face(tile);
  std::unordered_map<FaceId, std::vector<FaceId>> adj;
  for (FaceId e : t.boundary) {
    const auto& vs = c.face(e).vertices;
    if (vs.size() != 2) return {};
    adj[vs[0]].push_back(vs[1]);
    adj[vs[1]].push_back(vs[0]);
  }
  for (const auto& [v, ns] : adj)
    if (ns.size() != 2) return {};
  std::vector<FaceId> cycle;
  FaceId start = t.vertices.front();
  FaceId prev = start;
  FaceId cur = adj.at(start).front();
  cycle.push_back(start);
  while (cur != start) {
    cycle.push_back(cur);
    const auto& ns = adj.at(cur);
    FaceId next = ns[0] == prev ? ns[1] : ns[0];
    prev = cur;
    cur = next;
    if (cycle.size() > t.vertices.size()) return {};
  }
  return cycle.size() == t.vertices.size() ? cycle : std::vector<FaceId>{};
}

// Checks coordinates against the combinatorics: every vertex has a 2D
// rational point, points are pairwise distinct, and every tile's vertices
// are in strictly convex position around its edge cycle.
inline std::vector<GeoViolation> validate_geometry(const GeoTiling& g) {
  std::vector<GeoViolation> out;
  if (g.complex.dim() != 2) {
    out.push_back({"geometry checks are implemented for dimension 2 only", {}});
    return out;
  }
  for (FaceId v : g.complex.faces_of_rank(0)) {
    auto it = g.coords.find(v);
    if (it == g.coords.end())
      out.push_back({"vertex has no coordinates", {v}});
    else if (it->second.size() != 2)
      out.push_back({"vertex coordinates are not 2-dimensional", {v}});
  }
  if (!out.empty()) return out;
  {
    std::unordered_map<RationalPoint, FaceId, PointHash> seen;
    for (FaceId v : g.complex.faces_of_rank(0)) {
      auto [it, fresh] = seen.emplace(g.point(v), v);
      if (!fresh) out.push_back({"two vertices share one point", {it->second, v}});
    }
  }
  for (FaceId t : g.complex.tiles()) {
    std::vector<FaceId> cycle = tile_vertex_cycle(g.complex, t);
    if (cycle.empty()) {
      out.push_back({"tile edges do not form a single cycle", {t}});
      continue;
    }
    const std::size_t n = cycle.size();
    int sign = 0;
    bool convex = true;
    for (std::size_t i = 0; i < n; ++i) {
      const RationalPoint& a = g.point(cycle[i]);
      const RationalPoint& b = g.point(cycle[(i + 1) % n]);
      const RationalPoint& c = g.point(cycle[(i + 2) % n]);
      int s = cross2(a, b, c).sign();
      if (s == 0) {
        convex = false;
        break;
      }
      if (sign == 0) sign = s;
      if (s != sign) {
        convex = false;
        break;
      }
    }
    if (!convex) out.push_back({"tile vertices are not in strictly convex position", {t}});
  }
  return out;
}

// The k-th tile corona: a set of tiles, not a complex. The corona complex of
// the same center is exactly the complex of all faces of these tiles.
struct TileCorona {
  FaceId center = 0;
  int level = 0;
  int threshold = 0;
  std::vector<FaceId> tiles;     // sorted
  std::vector<FaceId> vertices;  // sorted union of the tiles' vertex sets
};

inline TileCorona tile_corona(const GeoTiling& g, FaceId center, int k, int l) {
  if (!is_corona_exact(g.complex, center, k, l)) throw InexactCorona(center, k);
  TileCorona out;
  out.center = center;
  out.level = k;
  out.threshold = l;
  auto dist = tile_distances(g.complex, center, l, k);
  for (const auto& [t, r] : dist) {
    out.tiles.push_back(t);
    const auto& vs = g.complex.face(t).vertices;
    out.vertices.insert(out.vertices.end(), vs.begin(), vs.end());
  }
  std::sort(out.tiles.begin(), out.tiles.end());
  std::sort(out.vertices.begin(), out.vertices.end());
  out.vertices.erase(std::unique(out.vertices.begin(), out.vertices.end()), out.vertices.end());
  return out;
}

// A tile bijection between tile coronas realized by an ambient isometry,
// recorded as the vertex correspondence. Exact squared-distance preservation
// over every vertex pair is equivalent to the existence of the isometry.
struct CongruenceWitness {
  TileCorona source;
  TileCorona target;
  std::unordered_map<FaceId, FaceId> vertex_map;
  std::unordered_map<FaceId, FaceId> tile_map;
};

namespace geodetail {

inline std::string side_key(const Rat& d0, const Rat& d1, int side) {
  return d0.str() + "|" + d1.str() + "|" + std::to_string(side);
}

// Attempts the vertex correspondence determined by mapping the ordered edge
// (v0,v1) to (w0,w1) with chirality eps: every vertex is located by its two
// squared distances to the edge ends plus its side of the edge line.
inline bool seed_vertex_map(const GeoTiling& ga, const GeoTiling& gb, const TileCorona& a,
                            const TileCorona& b, FaceId v0, FaceId v1, FaceId w0, FaceId w1,
                            int eps, std::unordered_map<FaceId, FaceId>& out) {
  const RationalPoint& p0 = ga.point(v0);
  const RationalPoint& p1 = ga.point(v1);
  const RationalPoint& q0 = gb.point(w0);
  const RationalPoint& q1 = gb.point(w1);
  std::unordered_map<std::string, FaceId> index;
  index.reserve(b.vertices.size());
  for (FaceId y : b.vertices) {
    const RationalPoint& q = gb.point(y);
    auto [it, fresh] =
        index.emplace(side_key(squared_distance(q, q0), squared_distance(q, q1),
                               cross2(q0, q1, q).sign()),
                      y);
    if (!fresh) return false;  // coincident points; broken geometry
  }
  out.clear();
  out.reserve(a.vertices.size());
  for (FaceId x : a.vertices) {
    const RationalPoint& p = ga.point(x);
    int side = cross2(p0, p1, p).sign();
    auto it = index.find(
        side_key(squared_distance(p, p0), squared_distance(p, p1), eps * side));
    if (it == index.end()) return false;
    out.emplace(x, it->second);
  }
  return out.size() == b.vertices.size();
}

inline bool distances_preserved(const GeoTiling& ga, const GeoTiling& gb, const TileCorona& a,
                                const std::unordered_map<FaceId, FaceId>& vmap) {
  for (std::size_t i = 0; i < a.vertices.size(); ++i)
    for (std::size_t j = i + 1; j < a.vertices.size(); ++j) {
      FaceId x = a.vertices[i];
      FaceId y = a.vertices[j];
      if (squared_distance(ga.point(x), ga.point(y)) !=
          squared_distance(gb.point(vmap.at(x)), gb.point(vmap.at(y))))
        return false;
    }
  return true;
}

inline bool induce_tile_map(const GeoTiling& ga, const GeoTiling& gb, const TileCorona& a,
                            const TileCorona& b,
                            const std::unordered_map<FaceId, FaceId>& vmap,
                            std::unordered_map<FaceId, FaceId>& tmap) {
  tmap.clear();
  std::unordered_set<FaceId> hit;
  for (FaceId t : a.tiles) {
    std::vector<FaceId> img;
    for (FaceId v : ga.complex.face(t).vertices) img.push_back(vmap.at(v));
    std::sort(img.begin(), img.end());
    auto f = gb.complex.face_with_vertices(img);
    if (!f || gb.complex.face(*f).rank != gb.complex.dim()) return false;
    if (!std::binary_search(b.tiles.begin(), b.tiles.end(), *f)) return false;
    if (!hit.insert(*f).second) return false;
    tmap.emplace(t, *f);
  }
  return tmap.at(a.center) == b.center && hit.size() == b.tiles.size();
}

}  // namespace geodetail

// Searches for an isometry mapping corona a onto corona b with center to
// center. Seeds fix one ordered edge of a's center and try every ordered
// edge of b's center with both chiralities; each seed determines the
// candidate isometry completely.
inline std::optional<CongruenceWitness> pairwise_congruent(const GeoTiling& ga,
                                                           const GeoTiling& gb,
                                                           const TileCorona& a,
                                                           const TileCorona& b) {
  if (a.level != b.level || a.threshold != b.threshold)
    throw LevelMismatch(a.level, b.level, a.threshold, b.threshold);
  if (ga.complex.dim() != 2 || gb.complex.dim() != 2)
    throw std::invalid_argument("pairwise_congruent: dimension 2 only");
  if (a.tiles.size() != b.tiles.size() || a.vertices.size() != b.vertices.size())
    return std::nullopt;
  FaceId ea = ga.complex.face(a.center).boundary.front();
  FaceId v0 = ga.complex.face(ea).vertices[0];
  FaceId v1 = ga.complex.face(ea).vertices[1];
  Rat s2 = squared_distance(ga.point(v0), ga.point(v1));
  for (FaceId eb : gb.complex.face(b.center).boundary) {
    const auto& wv = gb.complex.face(eb).vertices;
    for (int orient = 0; orient < 2; ++orient) {
      FaceId w0 = orient == 0 ? wv[0] : wv[1];
      FaceId w1 = orient == 0 ? wv[1] : wv[0];
      if (squared_distance(gb.point(w0), gb.point(w1)) != s2) continue;
      for (int eps : {1, -1}) {
        std::unordered_map<FaceId, FaceId> vmap;
        if (!geodetail::seed_vertex_map(ga, gb, a, b, v0, v1, w0, w1, eps, vmap)) continue;
        if (!geodetail::distances_preserved(ga, gb, a, vmap)) continue;
        std::unordered_map<FaceId, FaceId> tmap;
        if (!geodetail::induce_tile_map(ga, gb, a, b, vmap, tmap)) continue;
        CongruenceWitness w;
        w.source = a;
        w.target = b;
        w.vertex_map = std::move(vmap);
        w.tile_map = std::move(tmap);
        return w;
      }
    }
  }
  return std::nullopt;
}

// The symmetry group G_k(P): elements of the tile's symmetry group that map
// the k-th tile corona onto itself, as vertex permutations of the corona.
struct GeoSymGroup {
  TileCorona corona;
  std::vector<CongruenceWitness> elements;

  std::size_t order() const { return elements.size(); }

  // An isometry fixing P is determined by its action on P's vertices, so this
  // restriction identifies elements across corona levels.
  std::set<std::vector<std::pair<FaceId, FaceId>>> center_restrictions(
      const RankedComplex& c) const {
    std::set<std::vector<std::pair<FaceId, FaceId>>> out;
    for (const CongruenceWitness& w : elements) {
      std::vector<std::pair<FaceId, FaceId>> v;
      for (FaceId x : c.face(corona.center).vertices) v.emplace_back(x, w.vertex_map.at(x));
      std::sort(v.begin(), v.end());
      out.insert(std::move(v));
    }
    return out;
  }
};

inline GeoSymGroup symmetry_group(const GeoTiling& g, FaceId p, int k, int l) {
  GeoSymGroup out;
  out.corona = tile_corona(g, p, k, l);
  FaceId ea = g.complex.face(p).boundary.front();
  FaceId v0 = g.complex.face(ea).vertices[0];
  FaceId v1 = g.complex.face(ea).vertices[1];
  Rat s2 = squared_distance(g.point(v0), g.point(v1));
  for (FaceId eb : g.complex.face(p).boundary) {
    const auto& wv = g.complex.face(eb).vertices;
    for (int orient = 0; orient < 2; ++orient) {
      FaceId w0 = orient == 0 ? wv[0] : wv[1];
      FaceId w1 = orient == 0 ? wv[1] : wv[0];
      if (squared_distance(g.point(w0), g.point(w1)) != s2) continue;
      for (int eps : {1, -1}) {
        std::unordered_map<FaceId, FaceId> vmap;
        if (!geodetail::seed_vertex_map(g, g, out.corona, out.corona, v0, v1, w0, w1, eps, vmap))
          continue;
        if (!geodetail::distances_preserved(g, g, out.corona, vmap)) continue;
        std::unordered_map<FaceId, FaceId> tmap;
        if (!geodetail::induce_tile_map(g, g, out.corona, out.corona, vmap, tmap)) continue;
        if (tmap.at(p) != p) continue;
        CongruenceWitness w;
        w.source = out.corona;
        w.target = out.corona;
        w.vertex_map = std::move(vmap);
        w.tile_map = std::move(tmap);
        out.elements.push_back(std::move(w));
      }
    }
  }
  return out;
}

struct GeoClass {
  FaceId representative;
  std::vector<FaceId> members;
  TileCorona corona;
};

struct GeoClassification {
  int level = 0;
  int threshold = 0;
  std::vector<FaceId> core;
  std::vector<GeoClass> classes;
  std::unordered_map<FaceId, std::size_t> class_of;

  std::size_t count() const { return classes.size(); }  // M_k
};

namespace geodetail {

// Congruence-invariant bucket key: the multiset of all pairwise squared
// vertex distances plus basic counts.
inline std::string corona_shape_key(const GeoTiling& g, const TileCorona& c) {
  std::vector<std::string> dists;
  for (std::size_t i = 0; i < c.vertices.size(); ++i)
    for (std::size_t j = i + 1; j < c.vertices.size(); ++j)
      dists.push_back(
          squared_distance(g.point(c.vertices[i]), g.point(c.vertices[j])).str());
  std::sort(dists.begin(), dists.end());
  std::string key = std::to_string(c.tiles.size()) + "#" +
                    std::to_string(g.complex.face(c.center).vertices.size()) + "#";
  for (const std::string& d : dists) {
    key += d;
    key += ',';
  }
  return key;
}

}  // namespace geodetail

inline GeoClassification classify_geo(const GeoTiling& g, int k, int l,
                                      const std::vector<FaceId>& core) {
  GeoClassification out;
  out.level = k;
  out.threshold = l;
  out.core = core;
  std::sort(out.core.begin(), out.core.end());
  std::map<std::string, std::vector<std::size_t>> buckets;
  for (FaceId t : out.core) {
    TileCorona ct = tile_corona(g, t, k, l);
    std::string key = geodetail::corona_shape_key(g, ct);
    auto& candidates = buckets[key];
    bool placed = false;
    for (std::size_t idx : candidates) {
      if (pairwise_congruent(g, g, out.classes[idx].corona, ct)) {
        out.classes[idx].members.push_back(t);
        out.class_of.emplace(t, idx);
        placed = true;
        break;
      }
    }
    if (!placed) {
      candidates.push_back(out.classes.size());
      out.class_of.emplace(t, out.classes.size());
      out.classes.push_back({t, {t}, std::move(ct)});
    }
  }
  return out;
}

// M_0..M_{k_max} on a fixed core; non-decreasing for the same reason N_k is.
inline std::vector<std::pair<int, std::size_t>> geo_count_table(const GeoTiling& g, int k_max,
                                                                int l,
                                                                const std::vector<FaceId>& core) {
  std::vector<std::pair<int, std::size_t>> out;
  std::size_t prev = 0;
  for (int k = 0; k <= k_max; ++k) {
    std::size_t m = classify_geo(g, k, l, core).count();
    if (k > 0 && m < prev) throw Error("M_k decreased; congruence classification inconsistent");
    out.emplace_back(k, m);
    prev = m;
  }
  return out;
}

struct GeoChainRecord {
  FaceId representative = 0;
  std::vector<std::size_t> orders;
  std::vector<bool> equal_step;

  bool top_equal() const { return equal_step.empty() || equal_step.back(); }
};

inline GeoChainRecord geo_group_chain(const GeoTiling& g, FaceId tile, int k, int l) {
  GeoChainRecord rec;
  rec.representative = tile;
  std::vector<GeoSymGroup> groups;
  for (int j = 0; j <= k; ++j) {
    groups.push_back(symmetry_group(g, tile, j, l));
    rec.orders.push_back(groups.back().order());
  }
  for (int j = 1; j <= k; ++j) {
    auto lo = groups[static_cast<std::size_t>(j - 1)].center_restrictions(g.complex);
    auto hi = groups[static_cast<std::size_t>(j)].center_restrictions(g.complex);
    for (const auto& m : hi)
      if (!lo.count(m)) throw Error("corona symmetry does not restrict to the lower level");
    rec.equal_step.push_back(lo == hi);
  }
  return rec;
}

struct GeoKDiagnostics {
  int k = 0;
  std::size_t core_size = 0;
  std::size_t m_prev = 0;
  std::size_t m_cur = 0;
  bool cond1 = false;
  bool cond2 = false;
  std::vector<GeoChainRecord> chains;
};

struct GeoVerdict {
  VerdictKind kind = VerdictKind::Undetermined;
  std::size_t n = 0;
  int witness_k = 0;
  std::string reason;
  std::vector<GeoKDiagnostics> per_k;
};

// The periodicity checker: smallest k <= k_max with M_{k-1} = M_k and
// stabilized symmetry-group chains for every congruence class.
inline GeoVerdict check_geom_theorem(const GeoTiling& g, int k_max, int l,
                                     const CorePolicy& policy) {
  GeoVerdict v;
  for (int k = 1; k <= k_max; ++k) {
    std::vector<FaceId> core =
        policy.automatic ? exact_tiles(g.complex, k, l) : policy.explicit_core;
    GeoKDiagnostics diag;
    diag.k = k;
    diag.core_size = core.size();
    if (core.empty()) {
      v.per_k.push_back(diag);
      continue;
    }
    GeoClassification lo = classify_geo(g, k - 1, l, core);
    GeoClassification hi = classify_geo(g, k, l, core);
    diag.m_prev = lo.count();
    diag.m_cur = hi.count();
    diag.cond1 = lo.count() == hi.count();
    diag.cond2 = true;
    for (const GeoClass& cls : hi.classes) {
      diag.chains.push_back(geo_group_chain(g, cls.representative, k, l));
      if (!diag.chains.back().top_equal()) diag.cond2 = false;
    }
    v.per_k.push_back(diag);
    if (diag.cond1 && diag.cond2) {
      v.kind = VerdictKind::Periodic;
      v.n = diag.m_cur;
      v.witness_k = k;
      return v;
    }
  }
  v.kind = VerdictKind::Undetermined;
  v.reason = "no k <= " + std::to_string(k_max) + " satisfies both conditions on the exact core";
  return v;
}

// Every congruence of tile coronas induces an isomorphism of the centered
// corona complexes; this builds it, giving the bridge that makes M_k >= N_k.
inline CoronaMap witness_to_corona_map(const GeoTiling& g, const CongruenceWitness& w) {
  CoronaRef src = corona_ref(g.complex, w.source.center, w.source.level, w.source.threshold);
  CoronaRef dst = corona_ref(g.complex, w.target.center, w.target.level, w.target.threshold);
  CoronaMap m;
  m.source = src;
  m.target = dst;
  for (const Face& f : src->complex.all_faces()) {
    std::vector<FaceId> img;
    for (FaceId v : f.vertices) img.push_back(w.vertex_map.at(v));
    std::sort(img.begin(), img.end());
    auto y = dst->complex.face_with_vertices(img);
    if (!y || dst->complex.face(*y).rank != f.rank)
      throw Error("congruence witness does not induce a face bijection");
    m.fmap.emplace(f.id, *y);
  }
  m.seed_src = least_flag(src->complex, src->center);
  m.seed_dst = m.apply_flag(m.seed_src);
  return m;
}

}  // namespace coronas
