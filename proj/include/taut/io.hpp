#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"
#include "taut/strata.hpp"
#include "taut/twist.hpp"

namespace taut {

using Json = nlohmann::json;

/// Bumped whenever the class file layout changes; older cache files are
/// recomputed, never migrated.
inline constexpr int kFormatVersion = 1;

/// {genera: [...], legs: {marking: vertex}, edges: [{id, vertices: [a, b]}]}
Json graph_to_json(const StableGraph& g);
StableGraph graph_from_json(const Json& j);

/// Edge id -> value on the center side.
Json star_twist_to_json(const StarTwist& t);

/// {format_version, g, n, terms: [{graph, kappa: {v: {a: exponent}},
/// psi: {half-edge: exponent}, coeff: "p/q"}]}, terms in canonical-key order.
/// Zero exponents are omitted.
Json class_to_json(const TautClass& x);
/// Throws std::invalid_argument on malformed input or a version mismatch.
TautClass class_from_json(const Json& j);

/// Deterministic text form of a JSON document.
std::string dump(const Json& j);

std::uint64_t fnv1a64(const std::string& s);

/// Content-addressed store of class files, one per key.
class ClassCache {
 public:
  explicit ClassCache(std::filesystem::path dir);
  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path path_for(const std::string& key) const;
  /// nullopt when missing, unreadable, or written by another format version.
  std::optional<TautClass> load(const std::string& key) const;
  /// Writes a temporary file and renames it into place.
  void store(const std::string& key, const TautClass& x) const;

 private:
  std::filesystem::path dir_;
};

}  // namespace taut
