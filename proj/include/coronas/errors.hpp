#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace coronas {

using FaceId = std::uint32_t;

// Base class for all analysis errors. CLI maps these to exit code 1.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// The patch is not face-to-face: two faces intersect in a point set that is
// not a common face (or a facet lies in three or more tiles).
class NotFaceToFace : public Error {
public:
  NotFaceToFace(FaceId a, FaceId b, const std::string& detail)
      : Error("not face-to-face: faces " + std::to_string(a) + " and " +
              std::to_string(b) + (detail.empty() ? "" : ": " + detail)),
        first(a),
        second(b) {}
  FaceId first;
  FaceId second;
};

// A subcomplex restriction was requested for a face set that is not closed
// under taking boundaries.
class NotClosed : public Error {
public:
  NotClosed(FaceId face, FaceId missing)
      : Error("face set not boundary-closed: face " + std::to_string(face) +
              " needs absent face " + std::to_string(missing)),
        face(face),
        missing(missing) {}
  FaceId face;
  FaceId missing;
};

class UnknownGenerator : public Error {
public:
  explicit UnknownGenerator(const std::string& name)
      : Error("unknown generator: " + name), name(name) {}
  std::string name;
};

// Patch document could not be parsed; message carries position/field info.
class ParseError : public Error {
public:
  explicit ParseError(const std::string& detail) : Error("parse error: " + detail) {}
};

// Patch document parsed but the complex violates the patch invariants.
class ValidationError : public Error {
public:
  explicit ValidationError(const std::string& detail)
      : Error("validation error: " + detail) {}
};

// Corona operations were given coronas of different level k or threshold l.
class LevelMismatch : public Error {
public:
  LevelMismatch(int ka, int kb, int la, int lb)
      : Error("corona level mismatch: k=" + std::to_string(ka) + " vs " +
              std::to_string(kb) + ", l=" + std::to_string(la) + " vs " +
              std::to_string(lb)) {}
};

// A core tile's corona is truncated by the patch boundary at the requested
// level, so patch-local results would not be sound.
class InexactCorona : public Error {
public:
  InexactCorona(FaceId tile, int k)
      : Error("corona of tile " + std::to_string(tile) + " is not exact at k=" +
              std::to_string(k)),
        tile(tile),
        level(k) {}
  FaceId tile;
  int level;
};

class PreconditionFailed : public Error {
public:
  explicit PreconditionFailed(const std::string& detail)
      : Error("precondition failed: " + detail) {}
};

// A corona isomorphism admits no extension to the next level.
class NoExtension : public Error {
public:
  NoExtension(FaceId src, FaceId dst, const std::string& detail)
      : Error("no extension: obstruction at face pair (" + std::to_string(src) +
              ", " + std::to_string(dst) + ")" +
              (detail.empty() ? "" : ": " + detail)),
        source_face(src),
        target_face(dst) {}
  FaceId source_face;
  FaceId target_face;
};

// Two transport paths reached the same tile with different germs.
class PathInconsistency : public Error {
public:
  explicit PathInconsistency(FaceId tile)
      : Error("path inconsistency: conflicting germs at tile " + std::to_string(tile)),
        tile(tile) {}
  FaceId tile;
};

class NotAsymmetric : public Error {
public:
  NotAsymmetric(FaceId tile, std::size_t order)
      : Error("tile " + std::to_string(tile) +
              " has nontrivial combinatorial automorphisms (order " +
              std::to_string(order) + ")"),
        tile(tile),
        order(order) {}
  FaceId tile;
  std::size_t order;
};

}  // namespace coronas
