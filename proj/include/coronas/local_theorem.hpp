#pragma once

#include <future>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "coronas/extension.hpp"
#include "coronas/iso.hpp"

namespace coronas {

// Partition of the core tiles into isomorphism classes of centered
// k-coronas. Representatives are the least tile of each class; members have
// pairwise isomorphic centered coronas.
struct CoronaClass {
  FaceId representative;
  std::vector<FaceId> members;
  CoronaRef corona;  // representative's corona
};

struct CoronaClassification {
  int level = 0;
  int threshold = 0;
  std::vector<FaceId> core;
  std::vector<CoronaClass> classes;
  std::unordered_map<FaceId, std::size_t> class_of;

  std::size_t count() const { return classes.size(); }  // N_k

  bool same_partition(const CoronaClassification& o) const {
    if (core != o.core) return false;
    for (std::size_t i = 0; i < core.size(); ++i)
      for (std::size_t j = i + 1; j < core.size(); ++j) {
        bool a = class_of.at(core[i]) == class_of.at(core[j]);
        bool b = o.class_of.at(core[i]) == o.class_of.at(core[j]);
        if (a != b) return false;
      }
    return true;
  }
};

// Signature bucketing first, then pairwise flag propagation against class
// representatives within the bucket. Deterministic: tiles are processed in
// ascending id order, so representatives are minimal in their class. With
// jobs > 1 the corona extraction and signature phase runs on worker threads;
// the bucketing pass stays sequential, so results are identical.
inline CoronaClassification classify(const RankedComplex& c, int k, int l,
                                     const std::vector<FaceId>& core, int jobs = 1) {
  CoronaClassification out;
  out.level = k;
  out.threshold = l;
  out.core = core;
  std::sort(out.core.begin(), out.core.end());

  std::vector<std::pair<CoronaRef, std::string>> prepared(out.core.size());
  auto prepare = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      FaceId t = out.core[i];
      if (!is_corona_exact(c, t, k, l)) throw InexactCorona(t, k);
      CoronaRef ct = corona_ref(c, t, k, l);
      std::string key = signature(*ct).key();
      prepared[i] = {std::move(ct), std::move(key)};
    }
  };
  if (jobs > 1 && out.core.size() > 1) {
    std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), out.core.size());
    std::size_t chunk = (out.core.size() + workers - 1) / workers;
    std::vector<std::future<void>> futures;
    for (std::size_t w = 0; w < workers; ++w) {
      std::size_t begin = w * chunk;
      std::size_t end = std::min(out.core.size(), begin + chunk);
      if (begin >= end) break;
      futures.push_back(std::async(std::launch::async, prepare, begin, end));
    }
    for (auto& f : futures) f.get();
  } else {
    prepare(0, out.core.size());
  }

  std::map<std::string, std::vector<std::size_t>> buckets;  // signature key -> class indices
  for (std::size_t i = 0; i < out.core.size(); ++i) {
    FaceId t = out.core[i];
    CoronaRef ct = prepared[i].first;
    const std::string& key = prepared[i].second;
    auto& candidates = buckets[key];
    bool placed = false;
    for (std::size_t idx : candidates) {
      if (isomorphic(out.classes[idx].corona, ct)) {
        out.classes[idx].members.push_back(t);
        out.class_of.emplace(t, idx);
        placed = true;
        break;
      }
    }
    if (!placed) {
      candidates.push_back(out.classes.size());
      out.class_of.emplace(t, out.classes.size());
      out.classes.push_back({t, {t}, ct});
    }
  }
  return out;
}

// Sequence (k, N_k) for k = 0..k_max on a fixed core. The counts are
// non-decreasing because the level-k partition refines the level-(k-1) one.
inline std::vector<std::pair<int, std::size_t>> check_monotonicity(const RankedComplex& c,
                                                                   int k_max, int l,
                                                                   const std::vector<FaceId>& core) {
  std::vector<std::pair<int, std::size_t>> out;
  std::size_t prev = 0;
  for (int k = 0; k <= k_max; ++k) {
    std::size_t n = classify(c, k, l, core).count();
    if (k > 0 && n < prev) throw Error("N_k decreased; classification is inconsistent");
    out.emplace_back(k, n);
    prev = n;
  }
  return out;
}

// With N_{k-1} = N_k, two core tiles have isomorphic centered k-coronas if
// and only if their centered (k-1)-coronas are isomorphic; checked over all
// core pairs via the two partitions.
inline bool check_equal_counts(const RankedComplex& c, int k, int l, const std::vector<FaceId>& core) {
  if (k < 1) throw std::invalid_argument("check_equal_counts needs k >= 1");
  CoronaClassification lo = classify(c, k - 1, l, core);
  CoronaClassification hi = classify(c, k, l, core);
  if (lo.count() != hi.count())
    throw PreconditionFailed("N_{k-1} = " + std::to_string(lo.count()) +
                             " != N_k = " + std::to_string(hi.count()));
  return lo.same_partition(hi);
}

// Orders of the corona automorphism groups at levels 0..k of one tile, plus
// per-step equality flags. Equality at step j is decided by restriction:
// every element of the level-j group restricts into the level-(j-1) group,
// and the groups are equal exactly when every element of the level-(j-1)
// group arises this way.
struct GroupChainRecord {
  FaceId representative = 0;
  std::vector<std::size_t> orders;  // index j = group order at level j
  std::vector<bool> equal_step;     // index j-1 = (group at j-1 == group at j)

  bool top_equal() const { return equal_step.empty() || equal_step.back(); }
};

namespace detail {

inline std::set<std::vector<std::pair<FaceId, FaceId>>> canonical_maps(
    const std::vector<CoronaMap>& elements) {
  std::set<std::vector<std::pair<FaceId, FaceId>>> out;
  for (const CoronaMap& m : elements) {
    std::vector<std::pair<FaceId, FaceId>> v(m.fmap.begin(), m.fmap.end());
    std::sort(v.begin(), v.end());
    out.insert(std::move(v));
  }
  return out;
}

}  // namespace detail

inline GroupChainRecord group_chain(const RankedComplex& c, FaceId tile, int k, int l) {
  if (!is_corona_exact(c, tile, k, l)) throw InexactCorona(tile, k);
  GroupChainRecord rec;
  rec.representative = tile;
  CoronaRef top = corona_ref(c, tile, k, l);
  std::vector<CoronaAutGroup> groups;
  for (int j = 0; j <= k; ++j) {
    CoronaRef cj = j == k ? top : share(sub_corona(*top, j));
    groups.push_back(automorphism_group(cj));
    rec.orders.push_back(groups.back().order());
  }
  for (int j = 1; j <= k; ++j) {
    // Restrict the level-j group to level j-1 and compare element sets.
    std::vector<CoronaMap> restricted;
    for (const CoronaMap& m : groups[static_cast<std::size_t>(j)].elements)
      restricted.push_back(restrict_map(m, j - 1));
    auto lo = detail::canonical_maps(groups[static_cast<std::size_t>(j - 1)].elements);
    auto hi = detail::canonical_maps(restricted);
    for (const auto& m : hi)
      if (!lo.count(m)) throw Error("restriction left the lower corona group");
    rec.equal_step.push_back(lo == hi);
  }
  return rec;
}

struct ConditionsReport {
  bool cond1 = false;  // N_{k-1} = N_k (finite on the patch core)
  bool cond2 = false;  // group chains stabilize at k for every class
  std::size_t n_prev = 0;
  std::size_t n_cur = 0;
  std::vector<GroupChainRecord> chains;  // one per class of the level-k classification
};

inline ConditionsReport check_conditions(const RankedComplex& c, int k, int l,
                                         const std::vector<FaceId>& core, int jobs = 1) {
  if (k < 1) throw std::invalid_argument("check_conditions needs k >= 1");
  ConditionsReport rep;
  CoronaClassification lo = classify(c, k - 1, l, core, jobs);
  CoronaClassification hi = classify(c, k, l, core, jobs);
  rep.n_prev = lo.count();
  rep.n_cur = hi.count();
  rep.cond1 = rep.n_prev == rep.n_cur;
  rep.cond2 = true;
  for (const CoronaClass& cls : hi.classes) {
    rep.chains.push_back(group_chain(c, cls.representative, k, l));
    if (!rep.chains.back().top_equal()) rep.cond2 = false;
  }
  return rep;
}

enum class VerdictKind { Multihedral, Periodic, Undetermined, InvalidInput };

inline const char* verdict_name(VerdictKind k) {
  switch (k) {
    case VerdictKind::Multihedral: return "Multihedral";
    case VerdictKind::Periodic: return "Periodic";
    case VerdictKind::Undetermined: return "Undetermined";
    case VerdictKind::InvalidInput: return "InvalidInput";
  }
  return "?";
}

struct KDiagnostics {
  int k = 0;
  std::size_t core_size = 0;
  std::size_t n_prev = 0;
  std::size_t n_cur = 0;
  bool cond1 = false;
  bool cond2 = false;
  std::vector<GroupChainRecord> chains;
};

// Outcome of a local-theorem run. A finite patch can witness multihedrality
// (periodicity for the geometric theorem) but can never refute it, so the
// negative outcome is Undetermined, never "not multihedral".
struct Verdict {
  VerdictKind kind = VerdictKind::Undetermined;
  std::size_t n = 0;   // tile classes at the witness level
  int witness_k = 0;
  std::string reason;
  std::vector<KDiagnostics> per_k;
};

struct CorePolicy {
  bool automatic = true;            // per-k core = all tiles with exact k-coronas
  std::vector<FaceId> explicit_core;

  static CorePolicy auto_core() { return {}; }
  static CorePolicy fixed(std::vector<FaceId> tiles) { return {false, std::move(tiles)}; }
};

// Smallest k <= k_max at which both local conditions hold on the core,
// with per-k diagnostics either way. Verdicts are evaluated on exact coronas
// only.
inline Verdict find_local_k(const RankedComplex& c, int k_max, int l, const CorePolicy& policy,
                            int jobs = 1) {
  Verdict v;
  for (int k = 1; k <= k_max; ++k) {
    std::vector<FaceId> core =
        policy.automatic ? exact_tiles(c, k, l) : policy.explicit_core;
    KDiagnostics diag;
    diag.k = k;
    diag.core_size = core.size();
    if (core.empty()) {
      v.per_k.push_back(diag);
      continue;
    }
    ConditionsReport rep = check_conditions(c, k, l, core, jobs);
    diag.n_prev = rep.n_prev;
    diag.n_cur = rep.n_cur;
    diag.cond1 = rep.cond1;
    diag.cond2 = rep.cond2;
    diag.chains = rep.chains;
    v.per_k.push_back(diag);
    if (rep.cond1 && rep.cond2) {
      v.kind = VerdictKind::Multihedral;
      v.n = rep.n_cur;
      v.witness_k = k;
      return v;
    }
  }
  v.kind = VerdictKind::Undetermined;
  v.reason = "no k <= " + std::to_string(k_max) + " satisfies both conditions on the exact core";
  return v;
}

// Every element of the corona automorphism group of P must transport to a
// consistent automorphism germ across the exact zone; when the local
// conditions hold the group then equals the stabilizer of P in the full group.
inline bool stabilizer_check(const RankedComplex& c, FaceId p, int k, int l) {
  if (!is_corona_exact(c, p, k, l)) throw InexactCorona(p, k);
  std::unordered_set<FaceId> exact;
  for (FaceId t : c.tiles())
    if (is_corona_exact(c, t, k, l)) exact.insert(t);
  CoronaAutGroup g = automorphism_group(corona_ref(c, p, k, l));
  for (const CoronaMap& beta : g.elements) {
    auto transport = detail::transport_over_exact_zone(c, beta, exact);
    if (transport.conflict || transport.extension_failure) return false;
  }
  return true;
}

// Corollary shortcut for tilings by combinatorially asymmetric tiles: with
// all corona groups trivial, condition 2 is vacuous and condition 1 alone
// decides. Core tiles with nontrivial tile groups are rejected.
inline Verdict asymmetric_shortcut(const RankedComplex& c, int k, int l,
                                   const std::vector<FaceId>& core) {
  Verdict v;
  if (core.empty()) {
    v.kind = VerdictKind::InvalidInput;
    v.reason = "empty core";
    return v;
  }
  if (k < 1) throw std::invalid_argument("asymmetric_shortcut needs k >= 1");
  for (FaceId t : core) {
    CoronaAutGroup g = automorphism_group(corona_ref(c, t, 0, l));
    if (g.order() != 1) throw NotAsymmetric(t, g.order());
  }
  CoronaClassification lo = classify(c, k - 1, l, core);
  CoronaClassification hi = classify(c, k, l, core);
  KDiagnostics diag;
  diag.k = k;
  diag.core_size = core.size();
  diag.n_prev = lo.count();
  diag.n_cur = hi.count();
  diag.cond1 = lo.count() == hi.count();
  diag.cond2 = true;
  v.per_k.push_back(diag);
  if (diag.cond1) {
    v.kind = VerdictKind::Multihedral;
    v.n = hi.count();
    v.witness_k = k;
  } else {
    v.kind = VerdictKind::Undetermined;
    v.reason = "N_{k-1} != N_k";
  }
  return v;
}

}  // namespace coronas
