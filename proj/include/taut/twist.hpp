#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "taut/stable_graph.hpp"

namespace taut {

/// Integer values on the sides of basic nodes, indexed by half-edge. Legs and
/// both sides of a self-edge carry no value (they are not basic nodes).
using Twist = std::vector<std::optional<int>>;

/// Empty twist of the right shape for g.
Twist empty_twist(const StableGraph& g);

/// Builds a twist from one value per non-self edge, given on side 0 of the
/// edge; side 1 receives the negative.
Twist twist_from_edges(const StableGraph& g, const std::vector<int>& side0_values);

struct TwistVerdict {
  bool valid = true;
  std::string axiom;          // "balancing", "vanishing", "sign", "transitivity"
  std::vector<int> witness;   // half-edges, or graph vertices along a directed cycle
};

/// Checks balancing, vanishing, sign and transitivity, in that order.
/// Throws std::invalid_argument if `I` is not defined exactly on basic sides.
TwistVerdict validate_twist(const StableGraph& g, const Twist& I);

struct ComponentDigraph {
  std::vector<int> vertex_class;              // graph vertex -> class
  int num_classes = 0;
  std::vector<std::pair<int, int>> arcs;      // sorted, unique
};

/// Classes are components of the zero-twist subgraph. Throws std::domain_error
/// naming the edge when the vanishing condition fails.
ComponentDigraph component_digraph(const StableGraph& g, const Twist& I);

/// All twists satisfying the four axioms and the k-twisted degree condition
///   sum_{i -> v} m_i = k(2g(v)-2) + sum_{basic sides h at v} (I(h)+k)
///                      + k * #(self-edge half-edges at v)
/// at every vertex. Sorted, without duplicates.
std::vector<Twist> enumerate_twists_general(const StableGraph& g, const std::vector<int>& mu,
                                            int k = 1);

/// Center plus edges to outlying vertices; the center never has self-edges.
struct StarGraph {
  StableGraph graph;
  int center = 0;
};

/// Positive values I(e), one per edge, read on the center side.
using StarTwist = std::vector<int>;

enum class StarFilter {
  all,           // every simple star graph
  contributing,  // only graphs whose twist set is nonempty
};

/// Simple star graphs of type (g, mu): negative parts sit at the center.
/// Sorted by colored canonical key. Throws std::invalid_argument when
/// sum(mu) != 2g-2, or when include_trivial is requested for holomorphic mu.
std::vector<StarGraph> enumerate_simple_star_graphs(int g, const std::vector<int>& mu,
                                                    StarFilter filter = StarFilter::all,
                                                    bool include_trivial = true);

/// Tw(S): all I : E -> Z_{>0} with the center and outlying degree conditions.
std::vector<StarTwist> enumerate_star_twists(const StarGraph& s, const std::vector<int>& mu);

/// The general-twist view of a star twist (center side positive).
Twist star_twist_to_general(const StarGraph& s, const StarTwist& t);

/// True if s has a center with no self-edges and every edge meets the center.
bool is_star(const StableGraph& g, int center);

}  // namespace taut
