#pragma once

#include <deque>
#include <map>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "coronas/iso.hpp"

namespace coronas {

// A sequence of tiles whose consecutive intersections have at least the
// given rank. Transport uses facet sequences (threshold d-1): any two tiles
// of a face-to-face tiling are joinable by one.
struct TileSequence {
  std::vector<FaceId> tiles;
  int threshold = 0;

  static TileSequence facet_sequence(const RankedComplex& c, std::vector<FaceId> tiles) {
    return verified(c, std::move(tiles), c.dim() - 1);
  }

  static TileSequence verified(const RankedComplex& c, std::vector<FaceId> tiles, int threshold) {
    for (std::size_t i = 0; i + 1 < tiles.size(); ++i) {
      auto m = c.meet(tiles[i], tiles[i + 1]);
      if (!m || c.face(*m).rank < threshold)
        throw std::invalid_argument("tile sequence: step " + std::to_string(i) +
                                    " has no intersection of rank >= " +
                                    std::to_string(threshold));
    }
    TileSequence s;
    s.tiles = std::move(tiles);
    s.threshold = threshold;
    return s;
  }

  TileSequence reversed() const {
    TileSequence s = *this;
    std::reverse(s.tiles.begin(), s.tiles.end());
    return s;
  }
};

// Extends an isomorphism of centered (k-1)-coronas to the unique isomorphism
// of centered k-coronas restricting to it, by reseeding flag propagation on
// the level-k coronas. Requires both k-coronas to be exact in the patch.
inline CoronaMap extend_one_level(const RankedComplex& patch, const CoronaMap& alpha) {
  const int k = alpha.level() + 1;
  const int l = alpha.threshold();
  FaceId p = alpha.source->center;
  FaceId q = alpha.target->center;
  if (!is_corona_exact(patch, p, k, l)) throw InexactCorona(p, k);
  if (!is_corona_exact(patch, q, k, l)) throw InexactCorona(q, k);
  CoronaRef src = corona_ref(patch, p, k, l);
  CoronaRef dst = corona_ref(patch, q, k, l);
  PropagateFailure why;
  auto m = propagate(src, dst, alpha.seed_src, alpha.seed_dst, &why);
  if (!m) throw NoExtension(why.source_face, why.target_face, why.reason);
  // Flag-determination: the extension agrees with alpha on the sub-corona.
  for (const auto& [x, y] : alpha.fmap)
    if (m->fmap.at(x) != y)
      throw Error("extend_one_level: extension disagrees with its seed map");
  return *m;
}

namespace detail {

// One transport step: from the level-k map nu centered at u, derive the
// level-k map at the facet neighbor v. The (k-1)-corona of v is contained in
// the k-corona of u; the containment is asserted face by face.
inline CoronaMap transport_step(const RankedComplex& patch, const CoronaMap& nu, FaceId v) {
  const int k = nu.level();
  const int l = nu.threshold();
  if (k < 1) throw std::invalid_argument("transport needs corona level >= 1");
  auto it = nu.fmap.find(v);
  if (it == nu.fmap.end())
    throw std::invalid_argument("transport: next tile is outside the current corona");
  FaceId qv = it->second;
  CenteredCorona down = corona(patch, v, k - 1, l);
  CoronaMap beta;
  beta.fmap.reserve(down.complex.face_count());
  for (const Face& f : down.complex.all_faces()) {
    auto fit = nu.fmap.find(f.id);
    if (fit == nu.fmap.end())
      throw Error("transport: (k-1)-corona of the next tile is not contained in the k-corona");
    beta.fmap.emplace(f.id, fit->second);
  }
  CenteredCorona down_img = corona(patch, qv, k - 1, l);
  if (down_img.complex.face_count() != beta.fmap.size())
    throw NoExtension(v, qv, "restricted map does not cover the image (k-1)-corona");
  for (const auto& [x, y] : beta.fmap)
    if (!down_img.complex.has(y))
      throw NoExtension(x, y, "restricted image leaves the (k-1)-corona of the image tile");
  beta.source = share(std::move(down));
  beta.target = share(std::move(down_img));
  beta.seed_src = least_flag(beta.source->complex, v);
  beta.seed_dst = beta.apply_flag(beta.seed_src);
  return extend_one_level(patch, beta);
}

}  // namespace detail

// Transports a level-k corona isomorphism along a tile sequence starting at
// its center; the result is the corona isomorphism at the last tile of the
// sequence. When the local conditions hold at k every step succeeds; otherwise the
// failing step is reported.
inline CoronaMap propagate_along(const RankedComplex& patch, const CoronaMap& alpha,
                                 const TileSequence& seq) {
  if (!seq.tiles.empty() && seq.tiles.front() != alpha.source->center)
    throw std::invalid_argument("propagate_along: sequence does not start at the map's center");
  CoronaMap cur = alpha;
  for (std::size_t i = 1; i < seq.tiles.size(); ++i) cur = detail::transport_step(patch, cur, seq.tiles[i]);
  return cur;
}

// A glued germ of a combinatorial automorphism: the transported corona maps
// over a region of tiles, merged into one face bijection.
struct PartialAutomorphism {
  std::vector<FaceId> domain_tiles;
  FaceMap fmap;  // union of the germ maps, conflict-free
  CoronaMap seed;
  std::vector<std::pair<FaceId, FaceId>> steps;  // (tile, reached from)

  FaceId tile_image(FaceId t) const { return fmap.at(t); }
};

// Breadth-first transport of alpha to every tile of `region` along facet
// sequences. Path-consistency is checked eagerly: every non-tree transport
// edge compares germs, and all germ face maps are merged with conflict
// detection, so any disagreement between two transport routes surfaces as
// PathInconsistency instead of silently corrupting the germ.
inline PartialAutomorphism reconstruct(const RankedComplex& patch, const CoronaMap& alpha,
                                       const std::vector<FaceId>& region) {
  std::unordered_set<FaceId> in_region(region.begin(), region.end());
  FaceId start = alpha.source->center;
  if (!in_region.count(start))
    throw std::invalid_argument("reconstruct: region does not contain the seed center");

  PartialAutomorphism out;
  out.seed = alpha;
  std::unordered_map<FaceId, CoronaMap> germs;
  auto merge_faces = [&](const CoronaMap& germ) {
    for (const auto& [x, y] : germ.fmap) {
      auto [it, fresh] = out.fmap.emplace(x, y);
      if (!fresh && it->second != y) throw PathInconsistency(germ.source->center);
    }
  };
  germs.emplace(start, alpha);
  merge_faces(alpha);
  std::deque<FaceId> queue{start};
  std::unordered_set<FaceId> visited{start};
  while (!queue.empty()) {
    FaceId u = queue.front();
    queue.pop_front();
    const CoronaMap& nu = germs.at(u);
    for (FaceId v : patch.neighbors(u, patch.dim() - 1)) {
      if (!in_region.count(v)) continue;
      CoronaMap cand = detail::transport_step(patch, nu, v);
      auto git = germs.find(v);
      if (git != germs.end()) {
        if (!map_equal(git->second, cand)) throw PathInconsistency(v);
        continue;
      }
      merge_faces(cand);
      germs.emplace(v, std::move(cand));
      out.steps.emplace_back(v, u);
      visited.insert(v);
      queue.push_back(v);
    }
  }
  if (visited.size() != in_region.size()) {
    for (FaceId t : region)
      if (!visited.count(t))
        throw std::invalid_argument("reconstruct: region tile " + std::to_string(t) +
                                    " is not facet-reachable from the seed center");
  }
  out.domain_tiles.assign(visited.begin(), visited.end());
  std::sort(out.domain_tiles.begin(), out.domain_tiles.end());
  return out;
}

namespace detail {

struct AdaptiveTransport {
  std::unordered_map<FaceId, CoronaMap> germs;
  bool conflict = false;
  bool extension_failure = false;
};

// Transport that expands only where both sides stay inside the exact zone,
// skipping steps that would leave it instead of throwing. Conflicts are
// recorded, not thrown.
inline AdaptiveTransport transport_over_exact_zone(const RankedComplex& patch,
                                                   const CoronaMap& alpha,
                                                   const std::unordered_set<FaceId>& exact) {
  AdaptiveTransport out;
  FaceId start = alpha.source->center;
  out.germs.emplace(start, alpha);
  std::deque<FaceId> queue{start};
  while (!queue.empty() && !out.conflict) {
    FaceId u = queue.front();
    queue.pop_front();
    const CoronaMap nu = out.germs.at(u);
    for (FaceId v : patch.neighbors(u, patch.dim() - 1)) {
      if (!exact.count(v)) continue;
      auto img = nu.fmap.find(v);
      if (img == nu.fmap.end()) continue;
      if (!exact.count(img->second)) continue;
      CoronaMap cand;
      try {
        cand = transport_step(patch, nu, v);
      } catch (const Error&) {
        out.extension_failure = true;
        continue;
      }
      auto git = out.germs.find(v);
      if (git != out.germs.end()) {
        if (!map_equal(git->second, cand)) {
          out.conflict = true;
          break;
        }
        continue;
      }
      out.germs.emplace(v, std::move(cand));
      queue.push_back(v);
    }
  }
  return out;
}

}  // namespace detail

// Partition of the core tiles by reachability under reconstructed partial
// automorphisms: whenever an isomorphism of k-coronas transports to a germ
// mapping core tile u to core tile w, u and w land in one cell. When the
// local conditions hold at k this coincides with the corona classification.
inline std::vector<std::vector<FaceId>> orbit_partition(const RankedComplex& patch, int k, int l,
                                                        const std::vector<FaceId>& core) {
  std::vector<FaceId> tiles(core);
  std::sort(tiles.begin(), tiles.end());
  std::unordered_map<FaceId, FaceId> parent;
  for (FaceId t : tiles) parent.emplace(t, t);
  auto find = [&](FaceId x) {
    while (parent.at(x) != x) {
      parent[x] = parent.at(parent.at(x));
      x = parent.at(x);
    }
    return x;
  };
  auto unite = [&](FaceId a, FaceId b) { parent[find(a)] = find(b); };

  for (FaceId t : tiles)
    if (!is_corona_exact(patch, t, k, l)) throw InexactCorona(t, k);
  std::unordered_set<FaceId> exact;
  for (FaceId t : patch.tiles())
    if (is_corona_exact(patch, t, k, l)) exact.insert(t);

  std::vector<std::pair<FaceId, CoronaRef>> reps;
  std::unordered_set<FaceId> in_core(tiles.begin(), tiles.end());
  for (FaceId t : tiles) {
    CoronaRef ct = corona_ref(patch, t, k, l);
    bool matched = false;
    for (const auto& [rep, crep] : reps) {
      if (find(t) == find(rep)) {  // already reached by an earlier germ
        matched = true;
        break;
      }
      auto alpha = isomorphic(crep, ct);
      if (!alpha) continue;
      auto transport = detail::transport_over_exact_zone(patch, *alpha, exact);
      if (transport.conflict) throw PathInconsistency(t);
      for (const auto& [u, germ] : transport.germs) {
        if (!in_core.count(u)) continue;
        FaceId w = germ.fmap.at(u);
        if (in_core.count(w)) unite(u, w);
      }
      unite(rep, t);
      matched = true;
      break;
    }
    if (!matched) reps.emplace_back(t, ct);
  }

  std::map<FaceId, std::vector<FaceId>> cells;
  for (FaceId t : tiles) cells[find(t)].push_back(t);
  std::vector<std::vector<FaceId>> out;
  for (auto& [root, members] : cells) {
    std::sort(members.begin(), members.end());
    out.push_back(std::move(members));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace coronas
