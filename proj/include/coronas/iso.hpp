#pragma once

#include <deque>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "coronas/metric.hpp"

namespace coronas {

using CoronaRef = std::shared_ptr<const CenteredCorona>;

inline CoronaRef share(CenteredCorona c) {
  return std::make_shared<const CenteredCorona>(std::move(c));
}

inline CoronaRef corona_ref(const RankedComplex& c, FaceId center, int k, int l) {
  return share(corona(c, center, k, l));
}

using FaceMap = std::unordered_map<FaceId, FaceId>;

// A rank-preserving face bijection between centered coronas mapping center
// to center. Maps are produced by flag propagation, so every map is the
// unique isomorphism extending its flag seed.
struct CoronaMap {
  CoronaRef source;
  CoronaRef target;
  FaceMap fmap;
  Flag seed_src;
  Flag seed_dst;

  int level() const { return source->level; }
  int threshold() const { return source->threshold; }

  FaceId apply(FaceId f) const { return fmap.at(f); }

  Flag apply_flag(const Flag& fl) const {
    Flag out(fl.size());
    for (std::size_t i = 0; i < fl.size(); ++i) out[i] = fmap.at(fl[i]);
    return out;
  }

  bool is_identity() const {
    for (const auto& [a, b] : fmap)
      if (a != b) return false;
    return true;
  }
};

inline bool same_corona(const CenteredCorona& a, const CenteredCorona& b) {
  return a.center == b.center && a.level == b.level && a.threshold == b.threshold &&
         a.complex.face_count() == b.complex.face_count();
}

inline bool map_equal(const CoronaMap& a, const CoronaMap& b) {
  if (a.fmap.size() != b.fmap.size()) return false;
  for (const auto& [x, y] : a.fmap) {
    auto it = b.fmap.find(x);
    if (it == b.fmap.end() || it->second != y) return false;
  }
  return true;
}

// first, then second.
inline CoronaMap compose(const CoronaMap& first, const CoronaMap& second) {
  if (!same_corona(*first.target, *second.source))
    throw std::invalid_argument("compose: middle coronas differ");
  CoronaMap out;
  out.source = first.source;
  out.target = second.target;
  out.fmap.reserve(first.fmap.size());
  for (const auto& [x, y] : first.fmap) out.fmap.emplace(x, second.fmap.at(y));
  out.seed_src = first.seed_src;
  out.seed_dst = second.apply_flag(first.seed_dst);
  return out;
}

inline CoronaMap inverse(const CoronaMap& m) {
  CoronaMap out;
  out.source = m.target;
  out.target = m.source;
  out.fmap.reserve(m.fmap.size());
  for (const auto& [x, y] : m.fmap) out.fmap.emplace(y, x);
  out.seed_src = m.seed_dst;
  out.seed_dst = m.seed_src;
  return out;
}

struct PropagateFailure {
  FaceId source_face = 0;
  FaceId target_face = 0;
  std::string reason;
};

namespace detail {

inline bool counts_compatible(const CenteredCorona& a, const CenteredCorona& b) {
  if (a.complex.dim() != b.complex.dim()) return false;
  if (a.complex.face_count() != b.complex.face_count()) return false;
  for (int r = 0; r <= a.complex.dim(); ++r)
    if (a.complex.faces_of_rank(r).size() != b.complex.faces_of_rank(r).size()) return false;
  return a.ring.size() == b.ring.size();
}

}  // namespace detail

// Breadth-first closure of the seed pair (f0, g0) under flag adjacency in
// both coronas simultaneously. Returns the unique isomorphism sending f0 to
// g0 if one exists; any mismatch (one-sided adjacency, ring conflict,
// inconsistent face assignment) rejects the seed. Isomorphisms of centered
// coronas preserve distance from the center, so the ring filter never
// rejects a genuine isomorphism.
inline std::optional<CoronaMap> propagate(const CoronaRef& src, const CoronaRef& dst,
                                          const Flag& f0, const Flag& g0,
                                          PropagateFailure* why = nullptr) {
  const RankedComplex& a = src->complex;
  const RankedComplex& b = dst->complex;
  auto fail = [&](FaceId x, FaceId y, const char* reason) -> std::optional<CoronaMap> {
    if (why) *why = {x, y, reason};
    return std::nullopt;
  };
  if (src->level != dst->level || src->threshold != dst->threshold)
    throw LevelMismatch(src->level, dst->level, src->threshold, dst->threshold);
  if (f0.empty() || f0[f0.size() - 1] != src->center || !is_valid_flag(a, f0))
    throw std::invalid_argument("propagate: f0 is not a flag of the source center");
  if (g0.empty() || g0[g0.size() - 1] != dst->center || !is_valid_flag(b, g0))
    throw std::invalid_argument("propagate: g0 is not a flag of the target center");
  if (!detail::counts_compatible(*src, *dst)) return fail(src->center, dst->center, "face counts differ");

  const int d = a.dim();
  FaceMap fwd, rev;
  fwd.reserve(a.face_count());
  rev.reserve(a.face_count());

  auto assign = [&](const Flag& f, const Flag& g, FaceId* bad_src, FaceId* bad_dst,
                    const char** reason) {
    for (int r = 0; r <= d; ++r) {
      FaceId x = f[static_cast<std::size_t>(r)];
      FaceId y = g[static_cast<std::size_t>(r)];
      if (r == d && src->ring.at(x) != dst->ring.at(y)) {
        *bad_src = x;
        *bad_dst = y;
        *reason = "ring conflict";
        return false;
      }
      auto [fit, fnew] = fwd.emplace(x, y);
      if (!fnew && fit->second != y) {
        *bad_src = x;
        *bad_dst = y;
        *reason = "face image conflict";
        return false;
      }
      auto [rit, rnew] = rev.emplace(y, x);
      if (!rnew && rit->second != x) {
        *bad_src = x;
        *bad_dst = y;
        *reason = "face preimage conflict";
        return false;
      }
    }
    return true;
  };

  std::unordered_set<Flag, FaceIdVectorHash> visited;
  std::deque<std::pair<Flag, Flag>> queue;
  FaceId bad_src = 0, bad_dst = 0;
  const char* reason = "";
  if (!assign(f0, g0, &bad_src, &bad_dst, &reason)) return fail(bad_src, bad_dst, reason);
  visited.insert(f0);
  queue.emplace_back(f0, g0);

  while (!queue.empty()) {
    auto [f, g] = std::move(queue.front());
    queue.pop_front();
    for (int i = 0; i <= d; ++i) {
      auto af = adjacent_flag(a, f, i);
      auto ag = adjacent_flag(b, g, i);
      if (af.has_value() != ag.has_value())
        return fail(f[static_cast<std::size_t>(i)], g[static_cast<std::size_t>(i)],
                    "adjacency missing on one side");
      if (!af) continue;
      if (!assign(*af, *ag, &bad_src, &bad_dst, &reason))
        return fail(bad_src, bad_dst, reason);
      if (visited.insert(*af).second) queue.emplace_back(std::move(*af), std::move(*ag));
    }
  }

  if (fwd.size() != a.face_count() || rev.size() != b.face_count()) {
    // Every corona of a face-to-face patch at threshold l <= d-1 has a
    // connected flag graph; incomplete closure means broken input.
    throw Error("propagate: corona flag graph is not connected");
  }

  CoronaMap out;
  out.source = src;
  out.target = dst;
  out.fmap = std::move(fwd);
  out.seed_src = f0;
  out.seed_dst = g0;
  return out;
}

// Full verification that `m` is an isomorphism of centered coronas:
// bijective, rank-preserving, boundary-preserving both ways, center to
// center, ring-preserving. Used by tests and by cross-checks against the
// geometric route.
inline bool verify_corona_map(const CoronaMap& m) {
  const RankedComplex& a = m.source->complex;
  const RankedComplex& b = m.target->complex;
  if (m.fmap.size() != a.face_count() || a.face_count() != b.face_count()) return false;
  if (m.fmap.count(m.source->center) == 0) return false;
  if (m.fmap.at(m.source->center) != m.target->center) return false;
  std::unordered_set<FaceId> image;
  for (const auto& [x, y] : m.fmap) {
    if (!a.has(x) || !b.has(y)) return false;
    if (a.face(x).rank != b.face(y).rank) return false;
    if (!image.insert(y).second) return false;
    const auto& bd = a.face(x).boundary;
    const auto& img_bd = b.face(y).boundary;
    if (bd.size() != img_bd.size()) return false;
    for (FaceId u : bd)
      if (!std::binary_search(img_bd.begin(), img_bd.end(), m.fmap.at(u))) return false;
  }
  for (const auto& [t, r] : m.source->ring) {
    auto it = m.target->ring.find(m.fmap.at(t));
    if (it == m.target->ring.end() || it->second != r) return false;
  }
  return true;
}

// Canonical, order-independent summary of a centered corona. Equal
// signatures are necessary (not sufficient) for isomorphism; classification
// buckets by signature before trying seeds.
struct InvariantSignature {
  int level = 0;
  int threshold = 0;
  int dim = 0;
  std::vector<std::size_t> faces_by_rank;
  std::vector<std::vector<std::vector<std::size_t>>> ring_tile_fvectors;  // ring -> sorted f-vectors
  std::size_t center_flag_count = 0;
  std::vector<std::vector<std::size_t>> ring_interface;  // ring -> per-rank shared face counts

  bool operator==(const InvariantSignature& o) const = default;

  std::string key() const {
    std::string s;
    auto put = [&s](std::size_t v) {
      s += std::to_string(v);
      s += ',';
    };
    put(static_cast<std::size_t>(level));
    put(static_cast<std::size_t>(threshold));
    put(static_cast<std::size_t>(dim));
    put(center_flag_count);
    s += '|';
    for (auto v : faces_by_rank) put(v);
    s += '|';
    for (const auto& ring : ring_tile_fvectors) {
      for (const auto& fv : ring) {
        for (auto v : fv) put(v);
        s += ';';
      }
      s += '|';
    }
    for (const auto& ring : ring_interface) {
      for (auto v : ring) put(v);
      s += '|';
    }
    return s;
  }
};

inline InvariantSignature signature(const CenteredCorona& c) {
  InvariantSignature sig;
  sig.level = c.level;
  sig.threshold = c.threshold;
  sig.dim = c.complex.dim();
  const int d = sig.dim;
  for (int r = 0; r <= d; ++r) sig.faces_by_rank.push_back(c.complex.faces_of_rank(r).size());
  sig.ring_tile_fvectors.resize(static_cast<std::size_t>(c.level) + 1);
  for (const auto& [t, ring] : c.ring) {
    std::vector<std::size_t> fv(static_cast<std::size_t>(d) + 1, 0);
    for (FaceId f : c.complex.face(t).closure) ++fv[static_cast<std::size_t>(c.complex.face(f).rank)];
    sig.ring_tile_fvectors[static_cast<std::size_t>(ring)].push_back(std::move(fv));
  }
  for (auto& ring : sig.ring_tile_fvectors) std::sort(ring.begin(), ring.end());
  sig.center_flag_count = flags_of(c.complex, c.center).size();
  if (c.level > 0) {
    sig.ring_interface.assign(static_cast<std::size_t>(c.level),
                              std::vector<std::size_t>(static_cast<std::size_t>(d) + 1, 0));
    for (const Face& f : c.complex.all_faces()) {
      std::vector<char> present(static_cast<std::size_t>(c.level) + 1, 0);
      for (FaceId t : f.star_tiles) present[static_cast<std::size_t>(c.ring.at(t))] = 1;
      for (int j = 0; j < c.level; ++j)
        if (present[static_cast<std::size_t>(j)] && present[static_cast<std::size_t>(j) + 1])
          ++sig.ring_interface[static_cast<std::size_t>(j)][static_cast<std::size_t>(f.rank)];
    }
  }
  return sig;
}

// Decides isomorphism of centered coronas. The source seed is fixed to the
// canonical least flag of the center; flag-determination makes one source
// seed complete, so only target seeds vary. First success in seed order.
inline std::optional<CoronaMap> isomorphic(const CoronaRef& a, const CoronaRef& b) {
  if (a->level != b->level || a->threshold != b->threshold)
    throw LevelMismatch(a->level, b->level, a->threshold, b->threshold);
  if (!detail::counts_compatible(*a, *b)) return std::nullopt;
  Flag f0 = least_flag(a->complex, a->center);
  for (const Flag& g0 : flags_of(b->complex, b->center)) {
    auto m = propagate(a, b, f0, g0);
    if (m) return m;
  }
  return std::nullopt;
}

// The automorphism group of a centered corona: the stabilizer of the center
// in the full automorphism group of the corona complex. Elements are stored
// as explicit face bijections; groups at this scale are tiny.
struct CoronaAutGroup {
  CoronaRef corona;
  std::vector<CoronaMap> elements;

  std::size_t order() const { return elements.size(); }
};

inline CoronaAutGroup automorphism_group(const CoronaRef& c) {
  CoronaAutGroup g;
  g.corona = c;
  Flag f0 = least_flag(c->complex, c->center);
  for (const Flag& g0 : flags_of(c->complex, c->center)) {
    auto m = propagate(c, c, f0, g0);
    if (m) g.elements.push_back(std::move(*m));
  }
  return g;
}

// The induced map between the level-j sub-coronas, j <= level of m. The
// restriction of an automorphism is an automorphism.
inline CoronaMap restrict_map(const CoronaMap& m, int j) {
  if (j > m.level()) throw std::invalid_argument("restrict_map: level exceeds map level");
  CoronaRef src = share(sub_corona(*m.source, j));
  CoronaRef dst = share(sub_corona(*m.target, j));
  CoronaMap out;
  out.source = src;
  out.target = dst;
  out.fmap.reserve(src->complex.face_count());
  for (const Face& f : src->complex.all_faces()) {
    FaceId img = m.fmap.at(f.id);
    if (!dst->complex.has(img))
      throw Error("restrict_map: image leaves the sub-corona (ring not preserved)");
    out.fmap.emplace(f.id, img);
  }
  out.seed_src = least_flag(src->complex, src->center);
  out.seed_dst = out.apply_flag(out.seed_src);
  return out;
}

// Transports an automorphism group along an isomorphism of centered coronas
// via beta -> m . beta . m^-1; the image group acts on m's target corona.
inline CoronaAutGroup conjugate_group(const CoronaAutGroup& g, const CoronaMap& m) {
  if (!same_corona(*g.corona, *m.source))
    throw std::invalid_argument("conjugate_group: map does not start at the group's corona");
  CoronaAutGroup out;
  out.corona = m.target;
  FaceMap minv;
  minv.reserve(m.fmap.size());
  for (const auto& [x, y] : m.fmap) minv.emplace(y, x);
  for (const CoronaMap& beta : g.elements) {
    CoronaMap e;
    e.source = m.target;
    e.target = m.target;
    e.fmap.reserve(m.fmap.size());
    for (const auto& [y, x] : minv) e.fmap.emplace(y, m.fmap.at(beta.fmap.at(x)));
    e.seed_src = least_flag(m.target->complex, m.target->center);
    e.seed_dst = e.apply_flag(e.seed_src);
    out.elements.push_back(std::move(e));
  }
  return out;
}

}  // namespace coronas
