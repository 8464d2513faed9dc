#pragma once

// Hand-built complexes and lookup helpers shared by the test suites.

#include <array>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "coronas/complex.hpp"
#include "coronas/generators.hpp"

namespace fixtures {

using coronas::FaceId;
using coronas::FaceSpec;
using coronas::GeneratedPatch;
using coronas::RankedComplex;
using coronas::Rat;
using coronas::RationalPoint;

// Face lattice of the d-cube: faces are words over {0,1,*}, rank = number of
// stars, boundary = fix one star either way.
inline RankedComplex cube_complex(int d) {
  std::vector<std::string> words{""};
  for (int i = 0; i < d; ++i) {
    std::vector<std::string> next;
    for (const std::string& w : words)
      for (char ch : {'0', '1', '*'}) next.push_back(w + ch);
    words = std::move(next);
  }
  auto rank_of = [](const std::string& w) {
    return static_cast<int>(std::count(w.begin(), w.end(), '*'));
  };
  std::sort(words.begin(), words.end(), [&](const std::string& a, const std::string& b) {
    return rank_of(a) != rank_of(b) ? rank_of(a) < rank_of(b) : a < b;
  });
  std::unordered_map<std::string, FaceId> ids;
  for (const std::string& w : words) ids.emplace(w, static_cast<FaceId>(ids.size()));
  std::vector<FaceSpec> specs;
  for (const std::string& w : words) {
    FaceSpec f;
    f.id = ids.at(w);
    f.rank = rank_of(w);
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w[i] != '*') continue;
      std::string lo = w, hi = w;
      lo[i] = '0';
      hi[i] = '1';
      f.boundary.push_back(ids.at(lo));
      f.boundary.push_back(ids.at(hi));
    }
    specs.push_back(std::move(f));
  }
  return RankedComplex::build(d, std::move(specs));
}

// Three squares glued along one common edge; a face-to-face violation.
inline RankedComplex edge_book(int pages = 3) {
  std::vector<FaceSpec> specs;
  FaceId next = 0;
  FaceId a = next++;
  FaceId b = next++;
  specs.push_back({a, 0, {}});
  specs.push_back({b, 0, {}});
  std::vector<FaceId> spine_boundary{a, b};
  FaceId spine = 0;  // assigned after vertices
  std::vector<std::array<FaceId, 3>> page_edges;
  std::vector<std::array<FaceId, 2>> page_verts;
  for (int p = 0; p < pages; ++p) {
    FaceId c = next++;
    FaceId d = next++;
    specs.push_back({c, 0, {}});
    specs.push_back({d, 0, {}});
    page_verts.push_back({c, d});
  }
  spine = next++;
  specs.push_back({spine, 1, spine_boundary});
  std::vector<FaceId> tiles_boundary;
  for (int p = 0; p < pages; ++p) {
    auto [c, d] = std::pair{page_verts[p][0], page_verts[p][1]};
    FaceId e1 = next++;
    specs.push_back({e1, 1, {b, c}});
    FaceId e2 = next++;
    specs.push_back({e2, 1, {c, d}});
    FaceId e3 = next++;
    specs.push_back({e3, 1, {d, a}});
    page_edges.push_back({e1, e2, e3});
  }
  for (int p = 0; p < pages; ++p) {
    FaceId t = next++;
    specs.push_back({t, 2, {spine, page_edges[p][0], page_edges[p][1], page_edges[p][2]}});
  }
  return RankedComplex::build(2, std::move(specs));
}

inline RationalPoint pt(std::int64_t x, std::int64_t y) { return {Rat(x), Rat(y)}; }

// Tile whose vertex set sits exactly at the given points, if any.
inline std::optional<FaceId> tile_at(const GeneratedPatch& patch,
                                     const std::vector<RationalPoint>& points) {
  std::unordered_map<RationalPoint, FaceId, coronas::PointHash> by_coord;
  for (const auto& [id, p] : patch.coords) by_coord.emplace(p, id);
  std::vector<FaceId> verts;
  for (const RationalPoint& p : points) {
    auto it = by_coord.find(p);
    if (it == by_coord.end()) return std::nullopt;
    verts.push_back(it->second);
  }
  std::sort(verts.begin(), verts.end());
  auto f = patch.complex.face_with_vertices(verts);
  if (!f || patch.complex.face(*f).rank != patch.complex.dim()) return std::nullopt;
  return f;
}

// The unit square [0,1]^2 in grid-like generators.
inline FaceId origin_square(const GeneratedPatch& patch) {
  auto t = tile_at(patch, {pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)});
  if (!t) throw std::runtime_error("fixture: origin square not found");
  return *t;
}

inline std::vector<FaceId> tiles_at_ring(const GeneratedPatch& patch, int ring) {
  std::vector<FaceId> out;
  for (FaceId t : patch.complex.tiles())
    if (patch.gen_ring.at(t) == ring) out.push_back(t);
  return out;
}

}  // namespace fixtures
