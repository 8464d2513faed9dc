#include <doctest.h>

#include "coronas/complex.hpp"
#include "coronas/flags.hpp"
#include "coronas/generators.hpp"
#include "coronas/metric.hpp"
#include "coronas/validate.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace coronas;

TEST_CASE("3x3 square patch validates with the expected boundary ring") {
  GeneratedPatch p = generate({"square", 1});
  const RankedComplex& c = p.complex;
  CHECK(c.faces_of_rank(0).size() == 16);
  CHECK(c.faces_of_rank(1).size() == 24);
  CHECK(c.tiles().size() == 9);

  ValidationReport rep = validate(c);
  CHECK(rep.ok());
  // 12 hull edges, 12 hull vertices, 8 outer tiles are boundary.
  std::size_t boundary_edges = 0, boundary_vertices = 0, boundary_tiles = 0;
  for (FaceId f : rep.boundary_faces) {
    int r = c.face(f).rank;
    boundary_edges += r == 1;
    boundary_vertices += r == 0;
    boundary_tiles += r == 2;
  }
  CHECK(boundary_vertices == 12);
  CHECK(boundary_edges == 12);
  CHECK(boundary_tiles == 8);
  CHECK(rep.interior_tiles.size() == 1);
  // On a valid patch every face is either boundary or closed.
  CHECK(rep.boundary_faces.size() + rep.closed_faces.size() == c.face_count());
}

TEST_CASE("single cube validates; every face is boundary") {
  RankedComplex cube = fixtures::cube_complex(3);
  CHECK(cube.face_count() == 27);
  ValidationReport rep = validate(cube);
  CHECK(rep.ok());
  CHECK(rep.boundary_faces.size() == cube.face_count());
  CHECK(rep.closed_faces.empty());
  CHECK(rep.interior_tiles.empty());
}

TEST_CASE("a facet shared by three tiles is reported as NotFaceToFace") {
  RankedComplex book = fixtures::edge_book(3);
  ValidationReport rep = validate(book);
  REQUIRE(!rep.ok());
  bool found = false;
  for (const Violation& v : rep.violations)
    if (v.kind == ViolationKind::NotFaceToFace) found = true;
  CHECK(found);
}

TEST_CASE("meet picks the shared face") {
  GeneratedPatch p = generate({"square", 2});
  const RankedComplex& c = p.complex;
  FaceId t00 = fixtures::origin_square(p);
  FaceId t10 = *fixtures::tile_at(p, {fixtures::pt(1, 0), fixtures::pt(2, 0),
                                      fixtures::pt(2, 1), fixtures::pt(1, 1)});
  FaceId t11 = *fixtures::tile_at(p, {fixtures::pt(1, 1), fixtures::pt(2, 1),
                                      fixtures::pt(2, 2), fixtures::pt(1, 2)});

  auto shared_edge = c.meet(t00, t10);
  REQUIRE(shared_edge.has_value());
  CHECK(c.face(*shared_edge).rank == 1);

  auto shared_vertex = c.meet(t00, t11);
  REQUIRE(shared_vertex.has_value());
  CHECK(c.face(*shared_vertex).rank == 0);

  CHECK(c.meet(t00, t00) == t00);

  // Commutative and idempotent over all tile pairs of the patch.
  for (FaceId a : c.tiles())
    for (FaceId b : c.tiles()) {
      auto ab = c.meet(a, b);
      auto ba = c.meet(b, a);
      CHECK(ab == ba);
      if (ab) {
        CHECK(c.meet(*ab, *ab) == *ab);
        CHECK(c.contains(a, *ab));
        CHECK(c.contains(b, *ab));
      }
    }
}

TEST_CASE("flags: counts match brute-force chain enumeration") {
  GeneratedPatch sq = generate({"square", 1});
  FaceId t = fixtures::origin_square(sq);
  CHECK(flags_of(sq.complex, t).size() == 8);
  CHECK(oracle::count_maximal_chains(sq.complex, t) == 8);

  GeneratedPatch hex = generate({"hexagonal", 1});
  FaceId h = fixtures::tiles_at_ring(hex, 0).front();
  CHECK(flags_of(hex.complex, h).size() == 12);
  CHECK(oracle::count_maximal_chains(hex.complex, h) == 12);

  RankedComplex cube = fixtures::cube_complex(3);
  FaceId top = cube.tiles().front();
  CHECK(flags_of(cube, top).size() == 48);
  CHECK(oracle::count_maximal_chains(cube, top) == 48);

  // Every tile with a modest lattice agrees with the DP count.
  GeneratedPatch snub = generate({"snub_square", 1});
  for (FaceId tile : snub.complex.tiles())
    CHECK(flags_of(snub.complex, tile).size() ==
          oracle::count_maximal_chains(snub.complex, tile));
}

TEST_CASE("adjacent_flag is an involution and respects the patch boundary") {
  GeneratedPatch p = generate({"square", 1});
  const RankedComplex& c = p.complex;
  const int d = c.dim();
  for (FaceId t : c.tiles()) {
    for (const Flag& f : flags_of(c, t)) {
      for (int i = 0; i <= d; ++i) {
        auto g = adjacent_flag(c, f, i);
        if (i < d) {
          REQUIRE(g.has_value());
        } else {
          CHECK(g.has_value() == (c.tile_multiplicity(f[static_cast<std::size_t>(d - 1)]) == 2));
        }
        if (g) {
          CHECK(is_valid_flag(c, *g));
          auto back = adjacent_flag(c, *g, i);
          REQUIRE(back.has_value());
          CHECK(*back == f);
        }
      }
    }
  }
}

TEST_CASE("interior flag crosses to the facet neighbor at i = d") {
  GeneratedPatch p = generate({"square", 1});
  const RankedComplex& c = p.complex;
  FaceId center = fixtures::origin_square(p);
  for (const Flag& f : flags_of(c, center)) {
    auto g = adjacent_flag(c, f, 2);
    REQUIRE(g.has_value());
    CHECK((*g)[2] != center);
    CHECK(c.meet(center, (*g)[2]) == f[1]);
  }
}

TEST_CASE("restrict preserves ids and rejects non-closed sets") {
  GeneratedPatch p = generate({"square", 1});
  const RankedComplex& c = p.complex;
  FaceId center = fixtures::origin_square(p);
  RankedComplex sub = c.restricted(c.face(center).closure);
  CHECK(sub.face_count() == 9);
  CHECK(sub.has(center));
  CHECK(sub.face(center).rank == 2);

  std::vector<FaceId> bad = {center};  // drops the boundary faces
  CHECK_THROWS_AS((void)c.restricted(bad), NotClosed);
}

TEST_CASE("build rejects structurally unusable input") {
  CHECK_THROWS_AS(RankedComplex::build(2, {{0, 0, {}}, {0, 1, {}}}), std::invalid_argument);
  CHECK_THROWS_AS(RankedComplex::build(2, {{0, 1, {5}}}), std::invalid_argument);
  CHECK_THROWS_AS(RankedComplex::build(2, {{0, 3, {}}}), std::invalid_argument);
  CHECK_THROWS_AS(RankedComplex::build(2, {{0, 0, {}}, {1, 0, {0}}}), std::invalid_argument);
}
