#include <doctest.h>

#include <string>

#include "coronas/generators.hpp"
#include "coronas/geometry.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace coronas;

namespace {

GeoTiling geo_of(const GeneratedPatch& p) { return {p.complex, p.coords}; }

FaceId ring0_tile(const GeneratedPatch& p) { return fixtures::tiles_at_ring(p, 0).front(); }

// Reconstructs the ambient isometry from a witness and verifies it exactly:
// the matrix must be orthogonal and must map every corona vertex onto its
// image. Three cycle-consecutive vertices of the center are never collinear.
bool witness_realizes_isometry(const GeoTiling& g, const CongruenceWitness& w) {
  std::vector<FaceId> cyc = tile_vertex_cycle(g.complex, w.source.center);
  REQUIRE(cyc.size() >= 3);
  auto img = [&](FaceId v) { return g.point(w.vertex_map.at(v)); };
  auto m = oracle::solve_affine(g.point(cyc[0]), g.point(cyc[1]), g.point(cyc[2]),
                                img(cyc[0]), img(cyc[1]), img(cyc[2]));
  if (!m || !m->orthogonal()) return false;
  for (FaceId v : w.source.vertices)
    if (m->apply(g.point(v)) != img(v)) return false;
  return true;
}

}  // namespace

TEST_CASE("rational arithmetic is exact") {
  CHECK(Rat(2, 4) == Rat(1, 2));
  CHECK(Rat(-2, -4) == Rat(1, 2));
  CHECK(Rat(2, -4) == Rat(-1, 2));
  CHECK(Rat(1, 2) + Rat(1, 3) == Rat(5, 6));
  CHECK(Rat(1, 2) - Rat(1, 3) == Rat(1, 6));
  CHECK(Rat(2, 3) * Rat(3, 4) == Rat(1, 2));
  CHECK(Rat(1, 2) / Rat(1, 4) == Rat(2));
  CHECK(Rat(1, 3) < Rat(1, 2));
  CHECK(Rat(-1, 3) > Rat(-1, 2));
  CHECK(Rat(7).str() == "7");
  CHECK(Rat(-3, 6).str() == "-1/2");
  CHECK(Rat(0, 5).sign() == 0);
  CHECK_THROWS_AS(Rat(1, 0), std::domain_error);
  CHECK_THROWS_AS(Rat(1) / Rat(0), std::domain_error);
  // Reduction runs through 128-bit intermediates; genuine overflow throws.
  Rat big(INT64_MAX / 2, 1);
  CHECK_THROWS_AS(big * big, std::overflow_error);
  CHECK(Rat(1, INT64_MAX / 2) * Rat(2) == Rat(4, INT64_MAX - 1));

  RationalPoint a{Rat(0), Rat(0)}, b{Rat(3), Rat(4)};
  CHECK(squared_distance(a, b) == Rat(25));
  CHECK(cross2(a, b, RationalPoint{Rat(0), Rat(1)}).sign() > 0);
  CHECK(cross2(a, b, RationalPoint{Rat(6), Rat(8)}).sign() == 0);
}

TEST_CASE("geometry validation accepts the fixtures and flags defects") {
  for (const std::string& name : generator_names()) {
    GeneratedPatch p = generate({name, 2});
    INFO(name);
    CHECK(validate_geometry(geo_of(p)).empty());
  }

  GeneratedPatch p = generate({"square", 1});
  GeoTiling g = geo_of(p);
  // Missing coordinates.
  GeoTiling missing = g;
  missing.coords.erase(missing.coords.begin()->first);
  CHECK(!validate_geometry(missing).empty());
  // Two vertices on one point.
  GeoTiling dup = g;
  FaceId v0 = p.complex.faces_of_rank(0)[0];
  FaceId v1 = p.complex.faces_of_rank(0)[1];
  dup.coords[v1] = dup.coords[v0];
  CHECK(!validate_geometry(dup).empty());
  // A quad with three collinear vertices is not strictly convex.
  detail::PolygonPatchBuilder b;
  b.add_polygon({fixtures::pt(0, 0), fixtures::pt(1, 0), fixtures::pt(2, 0), fixtures::pt(0, 1)},
                0);
  GeneratedPatch degenerate = b.build("bad", 1, 1);
  CHECK(!validate_geometry(geo_of(degenerate)).empty());
}

TEST_CASE("tile coronas are sets of the expected size") {
  GeneratedPatch p = generate({"square", 3});
  GeoTiling g = geo_of(p);
  FaceId c = fixtures::origin_square(p);
  CHECK(tile_corona(g, c, 1, 0).tiles.size() == 9);
  CHECK(tile_corona(g, c, 1, 1).tiles.size() == 5);
  CHECK(tile_corona(g, c, 0, 0).tiles == std::vector<FaceId>{c});

  GeneratedPatch hex = generate({"hexagonal", 2});
  CHECK(tile_corona(geo_of(hex), ring0_tile(hex), 1, 0).tiles.size() == 7);

  FaceId corner = *fixtures::tile_at(p, {fixtures::pt(-3, -3), fixtures::pt(-2, -3),
                                         fixtures::pt(-2, -2), fixtures::pt(-3, -2)});
  CHECK_THROWS_AS((void)tile_corona(g, corner, 1, 0), InexactCorona);
}

TEST_CASE("pairwise congruence: identity, translation, and a rejected fake") {
  GeneratedPatch p = generate({"square", 4});
  GeoTiling g = geo_of(p);
  FaceId a = fixtures::origin_square(p);
  TileCorona ca = tile_corona(g, a, 1, 0);

  auto self = pairwise_congruent(g, g, ca, ca);
  REQUIRE(self.has_value());
  CHECK(self->tile_map.at(a) == a);
  CHECK(witness_realizes_isometry(g, *self));

  FaceId b = *fixtures::tile_at(p, {fixtures::pt(1, 1), fixtures::pt(2, 1), fixtures::pt(2, 2),
                                    fixtures::pt(1, 2)});
  TileCorona cb = tile_corona(g, b, 1, 0);
  auto m = pairwise_congruent(g, g, ca, cb);
  REQUIRE(m.has_value());
  CHECK(m->tile_map.at(a) == b);
  CHECK(witness_realizes_isometry(g, *m));

  // Congruent coronas induce isomorphic centered coronas.
  CoronaMap induced = witness_to_corona_map(g, *m);
  CHECK(verify_corona_map(induced));
}

TEST_CASE("bricks of different sizes are combinatorially alike, geometrically apart") {
  GeneratedPatch p = generate({"brick_two_sizes", 3});
  GeoTiling g = geo_of(p);
  FaceId narrow = fixtures::origin_square(p);
  FaceId wide = 0;
  bool found = false;
  for (FaceId t : p.core_tiles(1)) {
    std::vector<FaceId> cyc = tile_vertex_cycle(p.complex, t);
    Rat perimeter(0);
    for (std::size_t i = 0; i < cyc.size(); ++i)
      perimeter =
          perimeter + squared_distance(g.point(cyc[i]), g.point(cyc[(i + 1) % cyc.size()]));
    if (perimeter == Rat(10)) {  // 1+4+1+4: the 2x1 brick
      wide = t;
      found = true;
      break;
    }
  }
  REQUIRE(found);
  TileCorona cn = tile_corona(g, narrow, 0, 0);
  TileCorona cw = tile_corona(g, wide, 0, 0);
  CHECK(!pairwise_congruent(g, g, cn, cw).has_value());
  // ... although the 0-coronas are isomorphic as complexes.
  auto iso = isomorphic(share(corona(p.complex, narrow, 0, 0)),
                        share(corona(p.complex, wide, 0, 0)));
  CHECK(iso.has_value());
}

TEST_CASE("snub square: both square orientations fall in one congruence class") {
  GeneratedPatch p = generate({"snub_square", 3});
  GeoTiling g = geo_of(p);
  FaceId a = fixtures::origin_square(p);  // axis-aligned square
  auto b = fixtures::tile_at(p, {{Rat(1, 5), Rat(-7, 5)},
                                 {Rat(4, 5), Rat(-3, 5)},
                                 {Rat(0), Rat(0)},
                                 {Rat(-3, 5), Rat(-4, 5)}});
  REQUIRE(b.has_value());  // the rotated square below the origin
  for (int k : {0, 1}) {
    auto w = pairwise_congruent(g, g, tile_corona(g, a, k, 0), tile_corona(g, *b, k, 0));
    REQUIRE(w.has_value());
    CHECK(witness_realizes_isometry(g, *w));
    CHECK(verify_corona_map(witness_to_corona_map(g, *w)));
  }
}

TEST_CASE("symmetry groups: exact dihedral counts") {
  GeneratedPatch p = generate({"square", 3});
  GeoTiling g = geo_of(p);
  FaceId c = fixtures::origin_square(p);
  CHECK(symmetry_group(g, c, 0, 0).order() == 8);
  CHECK(symmetry_group(g, c, 1, 0).order() == 8);

  GeneratedPatch hex = generate({"hexagonal", 2});
  CHECK(symmetry_group(geo_of(hex), ring0_tile(hex), 0, 0).order() == 2);

  GeneratedPatch brick = generate({"brick_two_sizes", 3});
  FaceId narrow = fixtures::origin_square(brick);
  CHECK(symmetry_group(geo_of(brick), narrow, 0, 0).order() == 8);
  CHECK(symmetry_group(geo_of(brick), narrow, 1, 0).order() == 4);

  // A scalene tile admits only the identity.
  detail::PolygonPatchBuilder b;
  b.add_polygon({fixtures::pt(0, 0), fixtures::pt(5, 0), fixtures::pt(0, 3)}, 0);
  GeneratedPatch scalene = b.build("scalene", 1, 1);
  CHECK(symmetry_group(geo_of(scalene), scalene.complex.tiles().front(), 0, 0).order() == 1);
}

TEST_CASE("geometric classification: M_k against N_k") {
  GeneratedPatch sq = generate({"square", 3});
  CHECK(classify_geo(geo_of(sq), 1, 0, sq.core_tiles(1)).count() == 1);

  GeneratedPatch brick = generate({"brick_two_sizes", 3});
  auto bcore = brick.core_tiles(1);
  CHECK(classify_geo(geo_of(brick), 0, 0, bcore).count() == 2);
  CHECK(classify(brick.complex, 0, 0, bcore).count() == 1);  // M_0 > N_0

  GeneratedPatch snub = generate({"snub_square", 3});
  auto score = snub.core_tiles(1);
  CHECK(classify_geo(geo_of(snub), 0, 0, score).count() == 2);
  CHECK(classify_geo(geo_of(snub), 1, 0, score).count() == 2);

  // M_k >= N_k on every geometric fixture, both thresholds.
  for (const std::string& name : generator_names()) {
    GeneratedPatch p = generate({name, 4});
    auto core = p.core_tiles(2);
    if (core.empty()) continue;
    GeoTiling g = geo_of(p);
    for (int l : {0, 1})
      for (int k = 0; k <= 2; ++k) {
        INFO(name, " k=", k, " l=", l);
        CHECK(classify_geo(g, k, l, core).count() >= classify(p.complex, k, l, core).count());
      }
  }
}

TEST_CASE("congruence classes refine combinatorial classes member by member") {
  GeneratedPatch p = generate({"brick_two_sizes", 3});
  GeoTiling g = geo_of(p);
  auto core = p.core_tiles(1);
  GeoClassification geo = classify_geo(g, 1, 0, core);
  CoronaClassification comb = classify(p.complex, 1, 0, core);
  for (const GeoClass& cls : geo.classes)
    for (FaceId t : cls.members)
      CHECK(comb.class_of.at(t) == comb.class_of.at(cls.representative));
}

TEST_CASE("every accepted witness is realized by an exact orthogonal affine map") {
  for (const std::string& name : generator_names()) {
    GeneratedPatch p = generate({name, 3});
    GeoTiling g = geo_of(p);
    auto core = p.core_tiles(1);
    GeoClassification cls = classify_geo(g, 1, 0, core);
    for (const GeoClass& c : cls.classes) {
      std::size_t checked = 0;
      for (FaceId t : c.members) {
        if (checked == 3) break;
        auto w = pairwise_congruent(g, g, c.corona, tile_corona(g, t, 1, 0));
        REQUIRE(w.has_value());
        INFO(name, " rep=", c.representative, " member=", t);
        CHECK(witness_realizes_isometry(g, *w));
        ++checked;
      }
    }
  }
}

TEST_CASE("geometric chains: orders non-increasing with few drops") {
  auto omega = [](std::size_t n) {
    int count = 0;
    for (std::size_t p = 2; p <= n; ++p)
      while (n % p == 0) {
        n /= p;
        ++count;
      }
    return count;
  };
  for (const std::string& name : generator_names()) {
    GeneratedPatch p = generate({name, 4});
    auto core = p.core_tiles(2);
    if (core.empty()) continue;
    GeoTiling g = geo_of(p);
    GeoClassification cls = classify_geo(g, 2, 0, core);
    for (const GeoClass& c : cls.classes) {
      GeoChainRecord rec = geo_group_chain(g, c.representative, 2, 0);
      INFO(name, " rep=", c.representative);
      int drops = 0;
      for (std::size_t j = 1; j < rec.orders.size(); ++j) {
        CHECK(rec.orders[j] <= rec.orders[j - 1]);
        CHECK(rec.orders[j - 1] % rec.orders[j] == 0);
        CHECK(rec.equal_step[j - 1] == (rec.orders[j] == rec.orders[j - 1]));
        drops += rec.orders[j] < rec.orders[j - 1];
      }
      CHECK(drops <= omega(rec.orders.front()));
    }
  }
}

TEST_CASE("periodicity checker verdicts") {
  GeneratedPatch sq = generate({"square", 3});
  GeoVerdict v = check_geom_theorem(geo_of(sq), 3, 0, CorePolicy::auto_core());
  CHECK(v.kind == VerdictKind::Periodic);
  CHECK(v.n == 1);
  CHECK(v.witness_k == 1);

  GeneratedPatch brick = generate({"brick_two_sizes", 4});
  GeoVerdict vb = check_geom_theorem(geo_of(brick), 3, 0, CorePolicy::auto_core());
  CHECK(vb.kind == VerdictKind::Periodic);
  CHECK(vb.n == 2);
  CHECK(vb.witness_k == 2);

  GeneratedPatch snub = generate({"snub_square", 3});
  GeoVerdict vs = check_geom_theorem(geo_of(snub), 3, 0, CorePolicy::auto_core());
  CHECK(vs.kind == VerdictKind::Periodic);
  CHECK(vs.n == 2);

  // The exact core must be deep enough that the distance-to-defect invariant
  // keeps refining the classification; a shallow core saturates.
  GeneratedPatch d = generate({"defect_grid", 7});
  GeoVerdict vd = check_geom_theorem(geo_of(d), 3, 0, CorePolicy::auto_core());
  CHECK(vd.kind == VerdictKind::Undetermined);
}

TEST_CASE("the checker agrees between thresholds 0 and 1 on periodic fixtures") {
  for (const std::string& name :
       {"square", "triangular", "hexagonal", "snub_square", "brick_two_sizes"}) {
    GeneratedPatch p = generate({name, 4});
    GeoTiling g = geo_of(p);
    GeoVerdict v0 = check_geom_theorem(g, 3, 0, CorePolicy::auto_core());
    GeoVerdict v1 = check_geom_theorem(g, 3, 1, CorePolicy::auto_core());
    INFO(name);
    CHECK(v0.kind == VerdictKind::Periodic);
    CHECK(v1.kind == v0.kind);
    CHECK(v1.n == v0.n);
  }
}
