#pragma once

#include <chrono>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "coronas/generators.hpp"
#include "coronas/geometry.hpp"
#include "coronas/local_theorem.hpp"
#include "coronas/patch_doc.hpp"

namespace coronas {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kReportSchema = 1;

struct RunConfig {
  std::string input_path;  // file input, or
  std::string generator;   // generator input ...
  int radius = 0;          // ... with this radius (0 = pick automatically)
  int k_max = 3;
  int l = -1;  // -1 = use the default threshold d-2
  bool core_auto = true;
  std::vector<FaceId> explicit_core;
  int radius_cap = 12;
  int jobs = 1;
  bool with_timing = false;
  bool geometry = true;  // run the congruence checker when coordinates exist
};

// A resolved input: the complex plus coordinates when available. For
// generator inputs the radius is auto-enlarged (up to the cap) until every
// requested exactness precondition can be met.
struct ResolvedInput {
  RankedComplex complex;
  std::unordered_map<FaceId, RationalPoint> coords;
  std::string description;
  int radius = 0;
};

inline ResolvedInput resolve_input(const RunConfig& config) {
  ResolvedInput in;
  if (!config.generator.empty()) {
    int l = config.l;
    int r = std::max(config.radius > 0 ? config.radius : config.k_max + 1, 1);
    for (;; ++r) {
      GeneratedPatch p = generate({config.generator, r});
      int threshold = l >= 0 ? l : default_threshold(p.complex.dim());
      bool ok;
      if (config.core_auto) {
        ok = !exact_tiles(p.complex, config.k_max, threshold).empty();
      } else {
        ok = true;
        for (FaceId t : config.explicit_core)
          ok = ok && p.complex.has(t) && is_corona_exact(p.complex, t, config.k_max, threshold);
      }
      if (ok || r >= config.radius_cap) {
        in.complex = std::move(p.complex);
        in.coords = std::move(p.coords);
        in.radius = r;
        in.description = "generator " + config.generator + " radius " + std::to_string(r);
        return in;
      }
    }
  }
  PatchDocument doc = load_unchecked(config.input_path);
  in.complex = to_complex(doc);
  for (auto& [id, p] : doc.coordinates) in.coords.emplace(id, p);
  in.description = "file " + config.input_path;
  in.radius = doc.radius;
  return in;
}

struct Report {
  std::string tool = "coronas";
  std::string version = kToolVersion;
  int schema = kReportSchema;
  std::string input;
  int k_max = 0;
  int threshold = 0;
  std::size_t violations = 0;
  Verdict verdict;
  std::vector<std::pair<int, std::size_t>> n_table;  // per-k exact-core counts
  bool has_geometry = false;
  std::size_t geo_violations = 0;
  GeoVerdict geo_verdict;
  std::vector<std::pair<int, std::size_t>> m_table;
  long long elapsed_ms = -1;  // -1 = not recorded

  int exit_code() const {
    if (verdict.kind == VerdictKind::Multihedral) return 0;
    if (verdict.kind == VerdictKind::Undetermined) return 2;
    return 1;
  }
};

namespace detail {

inline nlohmann::json chains_json(const std::vector<GroupChainRecord>& chains) {
  nlohmann::json out = nlohmann::json::array();
  for (const GroupChainRecord& rec : chains) {
    nlohmann::json j;
    j["representative"] = rec.representative;
    j["orders"] = rec.orders;
    j["equal_step"] = rec.equal_step;
    out.push_back(std::move(j));
  }
  return out;
}

inline nlohmann::json geo_chains_json(const std::vector<GeoChainRecord>& chains) {
  nlohmann::json out = nlohmann::json::array();
  for (const GeoChainRecord& rec : chains) {
    nlohmann::json j;
    j["representative"] = rec.representative;
    j["orders"] = rec.orders;
    j["equal_step"] = rec.equal_step;
    out.push_back(std::move(j));
  }
  return out;
}

}  // namespace detail

inline nlohmann::json report_json(const Report& r) {
  nlohmann::json j;
  j["tool"] = r.tool;
  j["version"] = r.version;
  j["schema"] = r.schema;
  j["input"] = r.input;
  j["k_max"] = r.k_max;
  j["l"] = r.threshold;
  j["validation"] = {{"violations", r.violations}};
  j["verdict"] = {{"kind", verdict_name(r.verdict.kind)},
                  {"n", r.verdict.n},
                  {"witness_k", r.verdict.witness_k},
                  {"reason", r.verdict.reason}};
  j["n_table"] = r.n_table;
  nlohmann::json per_k = nlohmann::json::array();
  for (const KDiagnostics& d : r.verdict.per_k)
    per_k.push_back({{"k", d.k},
                     {"core_size", d.core_size},
                     {"n_prev", d.n_prev},
                     {"n_cur", d.n_cur},
                     {"cond1", d.cond1},
                     {"cond2", d.cond2},
                     {"chains", detail::chains_json(d.chains)}});
  j["per_k"] = std::move(per_k);
  if (r.has_geometry) {
    nlohmann::json g;
    g["violations"] = r.geo_violations;
    g["verdict"] = {{"kind", verdict_name(r.geo_verdict.kind)},
                    {"n", r.geo_verdict.n},
                    {"witness_k", r.geo_verdict.witness_k},
                    {"reason", r.geo_verdict.reason}};
    g["m_table"] = r.m_table;
    nlohmann::json gk = nlohmann::json::array();
    for (const GeoKDiagnostics& d : r.geo_verdict.per_k)
      gk.push_back({{"k", d.k},
                    {"core_size", d.core_size},
                    {"m_prev", d.m_prev},
                    {"m_cur", d.m_cur},
                    {"cond1", d.cond1},
                    {"cond2", d.cond2},
                    {"chains", detail::geo_chains_json(d.chains)}});
    g["per_k"] = std::move(gk);
    j["geometry"] = std::move(g);
  }
  if (r.elapsed_ms >= 0) j["timing_ms"] = r.elapsed_ms;
  return j;
}

inline std::string report_text(const Report& r) {
  std::ostringstream out;
  out << "input: " << r.input << "\n";
  out << "settings: k_max=" << r.k_max << " l=" << r.threshold << "\n";
  out << "validation: " << (r.violations == 0 ? "ok" : std::to_string(r.violations) + " violation(s)")
      << "\n";
  out << "N_k:";
  for (auto [k, n] : r.n_table) out << " " << n;
  out << "\n";
  out << "verdict: " << verdict_name(r.verdict.kind);
  if (r.verdict.kind == VerdictKind::Multihedral)
    out << " n=" << r.verdict.n << " witness_k=" << r.verdict.witness_k;
  if (!r.verdict.reason.empty()) out << " (" << r.verdict.reason << ")";
  out << "\n";
  for (const KDiagnostics& d : r.verdict.per_k) {
    out << "  k=" << d.k << ": core=" << d.core_size << " N " << d.n_prev << "->" << d.n_cur
        << " cond1=" << (d.cond1 ? "yes" : "no") << " cond2=" << (d.cond2 ? "yes" : "no");
    for (const GroupChainRecord& rec : d.chains) {
      out << " [rep " << rec.representative << ":";
      for (std::size_t o : rec.orders) out << " " << o;
      out << "]";
    }
    out << "\n";
  }
  if (r.has_geometry) {
    if (r.geo_violations != 0) {
      out << "geometry: skipped (" << r.geo_violations << " coordinate violation(s))\n";
    } else {
      out << "M_k:";
      for (auto [k, m] : r.m_table) out << " " << m;
      out << "\n";
      out << "geometric verdict: " << verdict_name(r.geo_verdict.kind);
      if (r.geo_verdict.kind == VerdictKind::Periodic)
        out << " n=" << r.geo_verdict.n << " witness_k=" << r.geo_verdict.witness_k;
      out << "\n";
    }
  }
  if (r.elapsed_ms >= 0) out << "elapsed_ms: " << r.elapsed_ms << "\n";
  return out.str();
}

// The whole pipeline: validate, classify per level, evaluate the local
// conditions, and run the geometric checker when coordinates are present.
inline Report run(const RunConfig& config) {
  auto started = std::chrono::steady_clock::now();
  ResolvedInput in = resolve_input(config);
  Report rep;
  rep.input = in.description;
  rep.k_max = config.k_max;
  rep.threshold = config.l >= 0 ? config.l : default_threshold(in.complex.dim());

  ValidationReport val = validate(in.complex);
  rep.violations = val.violations.size();
  if (!val.ok()) {
    rep.verdict.kind = VerdictKind::InvalidInput;
    rep.verdict.reason = "patch failed validation";
    return rep;
  }

  CorePolicy policy =
      config.core_auto ? CorePolicy::auto_core() : CorePolicy::fixed(config.explicit_core);
  rep.verdict = find_local_k(in.complex, config.k_max, rep.threshold, policy, config.jobs);

  for (int k = 0; k <= config.k_max; ++k) {
    std::vector<FaceId> core =
        config.core_auto ? exact_tiles(in.complex, k, rep.threshold) : config.explicit_core;
    if (core.empty()) break;
    rep.n_table.emplace_back(k, classify(in.complex, k, rep.threshold, core, config.jobs).count());
  }

  if (config.geometry && !in.coords.empty()) {
    rep.has_geometry = true;
    GeoTiling geo{in.complex, in.coords};
    rep.geo_violations = validate_geometry(geo).size();
    if (rep.geo_violations == 0) {
      rep.geo_verdict = check_geom_theorem(geo, config.k_max, rep.threshold, policy);
      for (int k = 0; k <= config.k_max; ++k) {
        std::vector<FaceId> core =
            config.core_auto ? exact_tiles(in.complex, k, rep.threshold) : config.explicit_core;
        if (core.empty()) break;
        rep.m_table.emplace_back(k, classify_geo(geo, k, rep.threshold, core).count());
      }
    }
  }

  if (config.with_timing)
    rep.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - started)
                         .count();
  return rep;
}

}  // namespace coronas
