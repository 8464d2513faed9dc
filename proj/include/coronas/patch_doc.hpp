#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "coronas/complex.hpp"
#include "coronas/generators.hpp"
#include "coronas/rational.hpp"
#include "coronas/validate.hpp"

namespace coronas {

// On-disk form of a patch: a structured JSON document with dense natural
// face ids and exact rational coordinates as integer pairs. Documents
// round-trip bit-exactly through save/load.
struct PatchDocument {
  int dimension = 2;
  std::vector<FaceSpec> faces;                 // sorted by id on save
  std::map<FaceId, RationalPoint> coordinates; // rank-0 ids only
  std::vector<FaceId> core;
  std::string generator;  // metadata, may be empty
  int radius = 0;         // metadata

  bool operator==(const PatchDocument& o) const {
    if (dimension != o.dimension || core != o.core || generator != o.generator ||
        radius != o.radius)
      return false;
    if (faces.size() != o.faces.size()) return false;
    for (std::size_t i = 0; i < faces.size(); ++i)
      if (faces[i].id != o.faces[i].id || faces[i].rank != o.faces[i].rank ||
          faces[i].boundary != o.faces[i].boundary)
        return false;
    return coordinates == o.coordinates;
  }
};

enum class DocFormat { Text, Compact };

namespace detail {

inline void normalize_document(PatchDocument& doc) {
  std::sort(doc.faces.begin(), doc.faces.end(),
            [](const FaceSpec& a, const FaceSpec& b) { return a.id < b.id; });
  for (FaceSpec& f : doc.faces) std::sort(f.boundary.begin(), f.boundary.end());
  std::sort(doc.core.begin(), doc.core.end());
}

}  // namespace detail

inline std::string write_document(const PatchDocument& in, DocFormat format = DocFormat::Text) {
  PatchDocument doc = in;
  detail::normalize_document(doc);
  nlohmann::json j;
  j["format"] = "corona-patch";
  j["version"] = 1;
  j["dimension"] = doc.dimension;
  if (!doc.generator.empty() || doc.radius != 0) {
    j["metadata"] = nlohmann::json::object();
    if (!doc.generator.empty()) j["metadata"]["generator"] = doc.generator;
    if (doc.radius != 0) j["metadata"]["radius"] = doc.radius;
  }
  j["faces"] = nlohmann::json::array();
  for (const FaceSpec& f : doc.faces)
    j["faces"].push_back({{"id", f.id}, {"rank", f.rank}, {"boundary", f.boundary}});
  if (!doc.coordinates.empty()) {
    j["coordinates"] = nlohmann::json::array();
    for (const auto& [id, p] : doc.coordinates) {
      nlohmann::json axes = nlohmann::json::array();
      for (const Rat& r : p) axes.push_back({r.num(), r.den()});
      j["coordinates"].push_back({{"id", id}, {"point", axes}});
    }
  }
  if (!doc.core.empty()) j["core"] = doc.core;
  return format == DocFormat::Text ? j.dump(2) + "\n" : j.dump();
}

inline PatchDocument read_document(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what());
  }
  PatchDocument doc;
  try {
    if (j.value("format", "") != "corona-patch")
      throw ParseError("field 'format': expected \"corona-patch\"");
    if (j.value("version", 0) != 1) throw ParseError("field 'version': unsupported");
    if (!j.contains("dimension")) throw ParseError("field 'dimension': missing");
    doc.dimension = j.at("dimension").get<int>();
    if (doc.dimension < 1) throw ParseError("field 'dimension': must be >= 1");
    if (!j.contains("faces") || !j.at("faces").is_array())
      throw ParseError("field 'faces': missing or not an array");
    for (const auto& jf : j.at("faces")) {
      FaceSpec f;
      f.id = jf.at("id").get<FaceId>();
      f.rank = jf.at("rank").get<int>();
      f.boundary = jf.value("boundary", std::vector<FaceId>{});
      doc.faces.push_back(std::move(f));
    }
    if (j.contains("coordinates")) {
      for (const auto& jc : j.at("coordinates")) {
        FaceId id = jc.at("id").get<FaceId>();
        RationalPoint p;
        for (const auto& axis : jc.at("point")) {
          if (!axis.is_array() || axis.size() != 2)
            throw ParseError("field 'coordinates': axis must be [numerator, denominator]");
          if (axis[1].get<std::int64_t>() == 0)
            throw ParseError("field 'coordinates': zero denominator");
          p.emplace_back(axis[0].get<std::int64_t>(), axis[1].get<std::int64_t>());
        }
        doc.coordinates.emplace(id, std::move(p));
      }
    }
    if (j.contains("core")) doc.core = j.at("core").get<std::vector<FaceId>>();
    if (j.contains("metadata")) {
      doc.generator = j.at("metadata").value("generator", "");
      doc.radius = j.at("metadata").value("radius", 0);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(e.what());
  }
  detail::normalize_document(doc);
  return doc;
}

inline RankedComplex to_complex(const PatchDocument& doc) {
  return RankedComplex::build(doc.dimension, doc.faces);
}

inline void save(const PatchDocument& doc, const std::string& path,
                 DocFormat format = DocFormat::Text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open for writing: " + path);
  out << write_document(doc, format);
}

// Reads, parses, and validates. ParseError for malformed documents,
// ValidationError when the complex is not a legal face-to-face patch.
inline PatchDocument load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  PatchDocument doc = read_document(buf.str());
  RankedComplex c;
  try {
    c = to_complex(doc);
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
  ValidationReport rep = validate(c);
  if (!rep.ok()) {
    std::string msg = std::to_string(rep.violations.size()) + " violation(s); first: ";
    msg += violation_name(rep.violations.front().kind);
    if (!rep.violations.front().detail.empty()) msg += " (" + rep.violations.front().detail + ")";
    throw ValidationError(msg);
  }
  return doc;
}

// Same, but returns the document without validating; tooling that wants to
// inspect broken patches uses this.
inline PatchDocument load_unchecked(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return read_document(buf.str());
}

inline PatchDocument document_from_patch(const GeneratedPatch& patch, int core_k = 1) {
  PatchDocument doc;
  doc.dimension = patch.complex.dim();
  for (const Face& f : patch.complex.all_faces()) doc.faces.push_back({f.id, f.rank, f.boundary});
  for (const auto& [id, p] : patch.coords) doc.coordinates.emplace(id, p);
  if (core_k >= 0) doc.core = patch.core_tiles(core_k);
  doc.generator = patch.name;
  doc.radius = patch.radius;
  detail::normalize_document(doc);
  return doc;
}

}  // namespace coronas
