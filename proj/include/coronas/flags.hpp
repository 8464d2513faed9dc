#pragma once

#include <optional>
#include <vector>

#include "coronas/complex.hpp"

namespace coronas {

// A flag is a maximal chain of faces, one per rank 0..d, indexed by rank.
using Flag = std::vector<FaceId>;

inline bool is_valid_flag(const RankedComplex& c, const Flag& flag) {
  if (static_cast<int>(flag.size()) != c.dim() + 1) return false;
  for (int r = 0; r <= c.dim(); ++r) {
    if (!c.has(flag[static_cast<std::size_t>(r)])) return false;
    if (c.face(flag[static_cast<std::size_t>(r)]).rank != r) return false;
  }
  for (int r = 1; r <= c.dim(); ++r) {
    const auto& bd = c.face(flag[static_cast<std::size_t>(r)]).boundary;
    if (!std::binary_search(bd.begin(), bd.end(), flag[static_cast<std::size_t>(r - 1)]))
      return false;
  }
  return true;
}

// The unique flag differing from `flag` exactly in its rank-i face, or
// nullopt where it does not exist in the patch. For i < d the adjacent flag
// lives inside the face lattice of flag[i+1] and exists whenever the tile is
// a genuine polytope; for i = d it crosses the facet flag[d-1] and is absent
// exactly at the patch boundary.
inline std::optional<Flag> adjacent_flag(const RankedComplex& c, const Flag& flag, int i) {
  const int d = c.dim();
  if (i < 0 || i > d) return std::nullopt;
  if (i == d) {
    const Face& facet = c.face(flag[static_cast<std::size_t>(d - 1)]);
    const auto& ts = facet.star_tiles;
    if (ts.size() != 2) return std::nullopt;
    Flag out = flag;
    out[static_cast<std::size_t>(d)] = ts[0] == flag[static_cast<std::size_t>(d)] ? ts[1] : ts[0];
    return out;
  }
  const Face& up = c.face(flag[static_cast<std::size_t>(i + 1)]);
  FaceId cur = flag[static_cast<std::size_t>(i)];
  FaceId other = cur;
  int found = 0;
  for (FaceId cand : up.boundary) {
    if (i > 0) {
      const auto& bd = c.face(cand).boundary;
      if (!std::binary_search(bd.begin(), bd.end(), flag[static_cast<std::size_t>(i - 1)]))
        continue;
    }
    ++found;
    if (cand != cur) other = cand;
  }
  // Diamond property: exactly two candidates between flag[i-1] and flag[i+1].
  if (found != 2 || other == cur) return std::nullopt;
  Flag out = flag;
  out[static_cast<std::size_t>(i)] = other;
  return out;
}

// All maximal chains through `tile`, in deterministic (lexicographic
// descent) order.
inline std::vector<Flag> flags_of(const RankedComplex& c, FaceId tile) {
  const int d = c.dim();
  if (c.face(tile).rank != d)
    throw std::invalid_argument("flags_of: face " + std::to_string(tile) + " is not a tile");
  std::vector<Flag> out;
  Flag chain(static_cast<std::size_t>(d) + 1);
  chain[static_cast<std::size_t>(d)] = tile;
  // Descend rank by rank, trying boundary faces in ascending id order.
  auto descend = [&](auto&& self, int rank) -> void {
    if (rank == 0) {
      out.push_back(chain);
      return;
    }
    for (FaceId b : c.face(chain[static_cast<std::size_t>(rank)]).boundary) {
      chain[static_cast<std::size_t>(rank - 1)] = b;
      self(self, rank - 1);
    }
  };
  descend(descend, d);
  return out;
}

// Lexicographically least flag of a tile; used as the canonical seed for
// isomorphism searches.
inline Flag least_flag(const RankedComplex& c, FaceId tile) {
  const int d = c.dim();
  Flag chain(static_cast<std::size_t>(d) + 1);
  chain[static_cast<std::size_t>(d)] = tile;
  for (int r = d; r > 0; --r)
    chain[static_cast<std::size_t>(r - 1)] = c.face(chain[static_cast<std::size_t>(r)]).boundary.front();
  return chain;
}

}  // namespace coronas
