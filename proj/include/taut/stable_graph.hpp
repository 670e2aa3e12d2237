#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace taut {

/// Dual graph of a stable nodal curve.
///
/// Half-edges follow a fixed numbering: half-edge i (0 <= i < n) is the leg
/// carrying marking i+1, and edge e owns half-edges n+2e and n+2e+1. The
/// involution is therefore implicit. Values are immutable once constructed.
class StableGraph {
 public:
  StableGraph() = default;

  /// `leg_vertices[i]` is the vertex of marking i+1; `edges[e]` holds the
  /// vertices of half-edges n+2e and n+2e+1. Throws std::invalid_argument if
  /// the result is not a connected stable graph.
  StableGraph(std::vector<int> genera, std::vector<int> leg_vertices,
              std::vector<std::pair<int, int>> edges);

  /// Same as the constructor but skips the connectivity/stability checks.
  static StableGraph unchecked(std::vector<int> genera, std::vector<int> leg_vertices,
                               std::vector<std::pair<int, int>> edges);

  /// The one-vertex graph of M_{g,n}.
  static StableGraph trivial(int g, int n);

  int num_vertices() const { return static_cast<int>(genera_.size()); }
  int num_legs() const { return n_; }
  int num_edges() const { return (num_half_edges() - n_) / 2; }
  int num_half_edges() const { return static_cast<int>(he_vertex_.size()); }

  int genus(int v) const { return genera_[v]; }
  const std::vector<int>& genera() const { return genera_; }
  int total_genus() const;
  int h1() const { return num_edges() - num_vertices() + 1; }

  int vertex_of(int h) const { return he_vertex_[h]; }
  bool is_leg(int h) const { return h < n_; }
  int partner(int h) const;
  /// Half-edge of marking i (1-based).
  int leg(int marking) const { return marking - 1; }
  int edge_of(int h) const { return (h - n_) / 2; }
  int half_edge(int e, int side) const { return n_ + 2 * e + side; }
  std::pair<int, int> edge(int e) const {
    return {he_vertex_[n_ + 2 * e], he_vertex_[n_ + 2 * e + 1]};
  }
  bool is_self_edge(int e) const { return edge(e).first == edge(e).second; }

  /// Number of half-edges (legs included) at v.
  int valence(int v) const;
  /// Half-edges at v: legs by marking, then edge sides by index.
  std::vector<int> half_edges_at(int v) const;
  /// dim M_{g(v), n(v)}.
  int vertex_dimension(int v) const { return 3 * genera_[v] - 3 + valence(v); }

  /// Throws std::invalid_argument naming the violated condition.
  void validate() const;
  bool is_connected() const;

  const std::vector<int>& half_edge_vertices() const { return he_vertex_; }

  friend bool operator==(const StableGraph&, const StableGraph&) = default;

 private:
  std::vector<int> genera_;
  std::vector<int> he_vertex_;
  int n_ = 0;
};

/// A bijection between two presentations: old index -> new index.
struct Relabeling {
  std::vector<int> vertex;
  std::vector<int> half_edge;
};

/// Optional colors refining isomorphism (decorations live here, never in the graph).
struct Coloring {
  std::vector<std::vector<int>> vertex;  // empty => uncolored
  std::vector<int> half_edge;            // empty => uncolored
};

struct CanonicalForm {
  StableGraph graph;
  Relabeling map;              // input -> canonical
  std::vector<int> key;        // total order on isomorphism classes
  std::uint64_t automorphisms = 0;  // |Aut| of the (colored) graph
};

/// Canonical representative of the (colored) isomorphism class. Legs are
/// always fixed pointwise.
CanonicalForm canonical_form(const StableGraph& g, const Coloring* colors = nullptr);

/// Order of Aut(Γ): permutations of vertices and half-edges preserving genus,
/// incidence, the involution and every leg.
std::uint64_t automorphism_order(const StableGraph& g);

/// All automorphisms as explicit relabelings (identity first).
std::vector<Relabeling> automorphisms(const StableGraph& g);

bool isomorphic(const StableGraph& a, const StableGraph& b);

/// All isomorphism classes of stable graphs of type (g, n), sorted by key.
/// Throws std::invalid_argument when 2g-2+n <= 0.
const std::vector<StableGraph>& enumerate_stable_graphs(int g, int n);

/// Contract the edges in `contract` (edge indices). Remaining edges keep
/// their relative order. `vertex_map` receives old vertex -> new vertex.
StableGraph contract_edges(const StableGraph& g, const std::vector<bool>& contract,
                           std::vector<int>* vertex_map = nullptr);

}  // namespace taut
