#pragma once

#include <cmath>
#include <cstdlib>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "coronas/complex.hpp"
#include "coronas/rational.hpp"

namespace coronas {

struct GeneratorSpec {
  std::string name;
  int radius = 1;
};

// A generated patch: the complex, exact vertex coordinates, and per-tile
// construction rings carrying the generator's exactness guarantee. Tiles
// with gen_ring <= radius - core_margin * k have exact k-coronas.
struct GeneratedPatch {
  std::string name;
  int radius = 0;
  int core_margin = 1;
  RankedComplex complex;
  std::unordered_map<FaceId, RationalPoint> coords;
  std::unordered_map<FaceId, int> gen_ring;

  std::vector<FaceId> core_tiles(int k) const {
    int cut = radius - core_margin * k;
    std::vector<FaceId> out;
    for (FaceId t : complex.tiles())
      if (gen_ring.at(t) <= cut) out.push_back(t);
    return out;
  }
};

namespace detail {

// Assembles a 2D patch from polygon vertex cycles. Vertices are deduplicated
// by exact coordinates, edges by vertex pair; two tiles agree on a shared
// edge or vertex exactly when their cycles use the same points, which is what
// makes the emitted patch face-to-face.
class PolygonPatchBuilder {
public:
  void add_polygon(const std::vector<RationalPoint>& cycle, int ring) {
    if (cycle.size() < 3) throw std::invalid_argument("polygon needs >= 3 vertices");
    std::vector<std::size_t> vids;
    vids.reserve(cycle.size());
    for (const RationalPoint& p : cycle) vids.push_back(vertex_id(p));
    std::vector<std::size_t> eids;
    for (std::size_t i = 0; i < vids.size(); ++i) {
      std::size_t a = vids[i];
      std::size_t b = vids[(i + 1) % vids.size()];
      if (a == b) throw std::invalid_argument("degenerate polygon edge");
      eids.push_back(edge_id(a, b));
    }
    tiles_.push_back({std::move(eids), ring});
  }

  GeneratedPatch build(const std::string& name, int radius, int core_margin) const {
    GeneratedPatch out;
    out.name = name;
    out.radius = radius;
    out.core_margin = core_margin;
    const FaceId nv = static_cast<FaceId>(points_.size());
    const FaceId ne = static_cast<FaceId>(edges_.size());
    std::vector<FaceSpec> specs;
    specs.reserve(points_.size() + edges_.size() + tiles_.size());
    for (FaceId v = 0; v < nv; ++v) specs.push_back({v, 0, {}});
    for (FaceId e = 0; e < ne; ++e)
      specs.push_back({nv + e,
                       1,
                       {static_cast<FaceId>(edges_[e].first), static_cast<FaceId>(edges_[e].second)}});
    for (std::size_t t = 0; t < tiles_.size(); ++t) {
      std::vector<FaceId> bd;
      for (std::size_t e : tiles_[t].edges) bd.push_back(nv + static_cast<FaceId>(e));
      specs.push_back({nv + ne + static_cast<FaceId>(t), 2, std::move(bd)});
    }
    out.complex = RankedComplex::build(2, std::move(specs));
    for (FaceId v = 0; v < nv; ++v) out.coords.emplace(v, points_[v]);
    for (std::size_t t = 0; t < tiles_.size(); ++t)
      out.gen_ring.emplace(nv + ne + static_cast<FaceId>(t), tiles_[t].ring);
    return out;
  }

private:
  std::size_t vertex_id(const RationalPoint& p) {
    auto [it, fresh] = vertex_ids_.emplace(p, points_.size());
    if (fresh) points_.push_back(p);
    return it->second;
  }

  std::size_t edge_id(std::size_t a, std::size_t b) {
    if (a > b) std::swap(a, b);
    auto [it, fresh] = edge_ids_.emplace(std::make_pair(a, b), edges_.size());
    if (fresh) edges_.emplace_back(a, b);
    return it->second;
  }

  struct TileRec {
    std::vector<std::size_t> edges;
    int ring;
  };

  struct PairHash {
    std::size_t operator()(const std::pair<std::size_t, std::size_t>& p) const {
      return p.first * 1000003u ^ p.second;
    }
  };

  std::vector<RationalPoint> points_;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
  std::unordered_map<RationalPoint, std::size_t, PointHash> vertex_ids_;
  std::unordered_map<std::pair<std::size_t, std::size_t>, std::size_t, PairHash> edge_ids_;
  std::vector<TileRec> tiles_;
};

inline RationalPoint pt(Rat x, Rat y) { return {x, y}; }

inline RationalPoint add(const RationalPoint& a, const RationalPoint& b) {
  return {a[0] + b[0], a[1] + b[1]};
}

inline int cheb(int i, int j) { return std::max(std::abs(i), std::abs(j)); }

inline int hex_ring(int q, int r) {
  int s = -q - r;
  return (std::abs(q) + std::abs(r) + std::abs(s)) / 2;
}

inline GeneratedPatch gen_square(int r) {
  PolygonPatchBuilder b;
  for (int i = -r; i <= r; ++i)
    for (int j = -r; j <= r; ++j)
      b.add_polygon({pt(i, j), pt(i + 1, j), pt(i + 1, j + 1), pt(i, j + 1)}, cheb(i, j));
  return b.build("square", r, 1);
}

inline GeneratedPatch gen_triangular(int r) {
  PolygonPatchBuilder b;
  for (int i = -r; i <= r; ++i)
    for (int j = -r; j <= r; ++j) {
      b.add_polygon({pt(i, j), pt(i + 1, j), pt(i, j + 1)}, cheb(i, j));
      b.add_polygon({pt(i + 1, j), pt(i + 1, j + 1), pt(i, j + 1)}, cheb(i, j));
    }
  return b.build("triangular", r, 1);
}

// Convex hexagon with opposite sides parallel and equal; such a hexagon
// tiles the plane by translations, giving the hexagonal tiling with exact
// rational coordinates (the regular realization needs sqrt(3)).
inline GeneratedPatch gen_hexagonal(int r) {
  const RationalPoint base[6] = {pt(0, 0), pt(2, 0), pt(3, 1), pt(3, 2), pt(1, 2), pt(0, 1)};
  // Translation lattice: u = (3,1), w = (1,2).
  PolygonPatchBuilder b;
  for (int m = -2 * r; m <= 2 * r; ++m)
    for (int n = -2 * r; n <= 2 * r; ++n) {
      if (hex_ring(m, n) > r) continue;
      RationalPoint o = pt(Rat(3) * m + Rat(1) * n, Rat(1) * m + Rat(2) * n);
      std::vector<RationalPoint> cycle;
      for (const RationalPoint& v : base) cycle.push_back(add(o, v));
      b.add_polygon(cycle, hex_ring(m, n));
    }
  return b.build("hexagonal", r, 1);
}

// Snub-square pattern realized with rationals: axis-aligned unit squares,
// unit squares rotated by the 3-4-5 angle, and congruent isosceles triangles
// between them. Two tile shapes, two combinatorial corona classes.
inline GeneratedPatch gen_snub_square(int r) {
  const RationalPoint e1 = pt(1, 0);
  const RationalPoint e2 = pt(0, 1);
  const RationalPoint f1 = pt(Rat(3, 5), Rat(4, 5));
  const RationalPoint f2 = pt(Rat(-4, 5), Rat(3, 5));
  PolygonPatchBuilder b;
  for (int m = -r; m <= r; ++m)
    for (int n = -r; n <= r; ++n) {
      int ring = cheb(m, n);
      RationalPoint o = pt(Rat(8, 5) * m + Rat(-4, 5) * n, Rat(4, 5) * m + Rat(8, 5) * n);
      RationalPoint oe1 = add(o, e1);
      RationalPoint oe2 = add(o, e2);
      RationalPoint oe12 = add(oe1, e2);
      // axis-aligned square
      b.add_polygon({o, oe1, oe12, oe2}, ring);
      // rotated square
      RationalPoint q = add(o, pt(Rat(1, 5), Rat(-7, 5)));
      RationalPoint qf1 = add(q, f1);
      RationalPoint qf12 = add(qf1, f2);
      RationalPoint qf2 = add(q, f2);
      b.add_polygon({q, qf1, qf12, qf2}, ring);
      // the four triangles attached to the axis-aligned square
      b.add_polygon({o, oe1, pt(o[0] - f2[0], o[1] - f2[1])}, ring);           // bottom
      b.add_polygon({oe1, oe12, add(oe1, f1)}, ring);                          // right
      b.add_polygon({oe2, oe12, add(oe12, f2)}, ring);                         // top
      b.add_polygon({o, oe2, pt(oe2[0] - f1[0], oe2[1] - f1[1])}, ring);       // left
    }
  return b.build("snub_square", r, 1);
}

// Rectangular grid with alternating column widths 1 and 2. One combinatorial
// tile class, two congruence classes.
inline GeneratedPatch gen_brick_two_sizes(int r) {
  auto width = [](int c) { return (((c % 2) + 2) % 2 == 0) ? 1 : 2; };
  std::map<int, int> x0;
  x0[0] = 0;
  for (int c = 1; c <= r; ++c) x0[c] = x0[c - 1] + width(c - 1);
  for (int c = -1; c >= -r; --c) x0[c] = x0[c + 1] - width(c);
  PolygonPatchBuilder b;
  for (int c = -r; c <= r; ++c)
    for (int j = -r; j <= r; ++j) {
      int x = x0[c];
      int w = width(c);
      b.add_polygon({pt(x, j), pt(x + w, j), pt(x + w, j + 1), pt(x, j + 1)}, cheb(c, j));
    }
  return b.build("brick_two_sizes", r, 1);
}

// Square grid with the central cell split into two quadrilaterals; the two
// cells beside it become pentagons so the patch stays face-to-face. The
// split vertices are nudged off the grid lines to keep every tile strictly
// convex. Distance to the defect is a corona invariant, so N_k grows with k.
inline GeneratedPatch gen_defect_grid(int r) {
  if (r < 1) throw std::invalid_argument("defect_grid needs radius >= 1");
  PolygonPatchBuilder b;
  const Rat h(1, 2);
  const RationalPoint sl = pt(Rat(1, 4), h);   // left split vertex
  const RationalPoint sr = pt(Rat(3, 4), h);   // right split vertex
  for (int i = -r; i <= r; ++i)
    for (int j = -r; j <= r; ++j) {
      int ring = cheb(i, j);
      if (i == 0 && j == 0) {
        b.add_polygon({pt(0, 0), pt(1, 0), sr, sl}, 0);
        b.add_polygon({sl, sr, pt(1, 1), pt(0, 1)}, 0);
      } else if (i == -1 && j == 0) {
        b.add_polygon({pt(-1, 0), pt(0, 0), sl, pt(0, 1), pt(-1, 1)}, ring);
      } else if (i == 1 && j == 0) {
        b.add_polygon({pt(1, 0), pt(2, 0), pt(2, 1), pt(1, 1), sr}, ring);
      } else {
        b.add_polygon({pt(i, j), pt(i + 1, j), pt(i + 1, j + 1), pt(i, j + 1)}, ring);
      }
    }
  return b.build("defect_grid", r, 1);
}

}  // namespace detail

inline std::vector<std::string> generator_names() {
  return {"square", "triangular", "hexagonal", "snub_square", "brick_two_sizes", "defect_grid"};
}

inline GeneratedPatch generate(const GeneratorSpec& spec) {
  if (spec.radius < 1) throw std::invalid_argument("generator radius must be >= 1");
  if (spec.name == "square") return detail::gen_square(spec.radius);
  if (spec.name == "triangular") return detail::gen_triangular(spec.radius);
  if (spec.name == "hexagonal") return detail::gen_hexagonal(spec.radius);
  if (spec.name == "snub_square") return detail::gen_snub_square(spec.radius);
  if (spec.name == "brick_two_sizes") return detail::gen_brick_two_sizes(spec.radius);
  if (spec.name == "defect_grid") return detail::gen_defect_grid(spec.radius);
  throw UnknownGenerator(spec.name);
}

}  // namespace coronas
