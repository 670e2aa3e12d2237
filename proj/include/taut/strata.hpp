#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "taut/rational.hpp"
#include "taut/stable_graph.hpp"

namespace taut {

/// One additive generator [Γ, γ]: a boundary stratum with a κ-monomial at
/// each vertex and ψ-powers at half-edges.
struct DecoratedStratum {
  StableGraph graph;
  std::vector<std::vector<int>> kappa;  // per vertex: sorted multiset of indices a >= 1
  std::vector<int> psi;                 // per half-edge (legs included)

  static DecoratedStratum bare(const StableGraph& g);

  int vertex_degree(int v) const;
  int degree() const;
  /// Some vertex carries more than its dimension: the class is zero.
  bool vanishes() const;
  Coloring coloring() const;
  friend bool operator==(const DecoratedStratum&, const DecoratedStratum&) = default;
};

/// Canonical representative and its total-order key.
struct CanonicalStratum {
  DecoratedStratum stratum;
  std::vector<int> key;
};
CanonicalStratum canonicalize(const DecoratedStratum& s);

/// Finite rational combination of canonical generators on Mbar_{g,n}.
class TautClass {
 public:
  struct Entry {
    DecoratedStratum stratum;
    Rational coeff;
  };
  using Terms = std::map<std::vector<int>, Entry>;

  TautClass() = default;
  TautClass(int g, int n);

  static TautClass unit(int g, int n);
  /// ψ_i for marking i (1-based).
  static TautClass psi(int g, int n, int marking);
  static TautClass kappa(int g, int n, int a);
  /// ξ_Γ*(1) without automorphism division.
  static TautClass boundary(const StableGraph& gamma);
  static TautClass from_stratum(int g, int n, const DecoratedStratum& s, const Rational& c = 1);

  int genus() const { return g_; }
  int markings() const { return n_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  size_t size() const { return terms_.size(); }

  /// Adds c·s; canonicalizes, drops vanishing generators and zero sums.
  void add_term(const DecoratedStratum& s, const Rational& c);
  /// Same, for a stratum already in canonical form with its key.
  void add_canonical(const std::vector<int>& key, const DecoratedStratum& s, const Rational& c);

  TautClass& operator+=(const TautClass& other);
  TautClass& operator-=(const TautClass& other);
  TautClass& operator*=(const Rational& c);
  friend TautClass operator+(TautClass a, const TautClass& b) { return a += b; }
  friend TautClass operator-(TautClass a, const TautClass& b) { return a -= b; }
  friend TautClass operator*(TautClass a, const Rational& c) { return a *= c; }
  friend TautClass operator*(const Rational& c, TautClass a) { return a *= c; }
  friend bool operator==(const TautClass& a, const TautClass& b);

  TautClass degree_part(int d) const;
  /// Largest degree among terms, -1 for the zero class.
  int max_degree() const;

 private:
  void check_ambient(const TautClass& other) const;
  int g_ = 0;
  int n_ = 0;
  Terms terms_;
};

/// Pushes per-vertex classes forward along ξ_Γ. Slot j of vertex v is the
/// j-th entry of Γ.half_edges_at(v), which is marking j+1 of classes[v].
TautClass compose_at_vertices(const StableGraph& gamma, const std::vector<TautClass>& classes);

/// Excess-intersection product.
TautClass multiply(const TautClass& x, const TautClass& y);

/// Streams the product term by term without canonicalizing; used by pairings.
void for_each_product_term(const TautClass& x, const TautClass& y,
                           const std::function<void(const DecoratedStratum&, const Rational&)>& f);

/// Pushforward along the map forgetting the last marking.
TautClass forget_pushforward(const TautClass& x);

/// Pullback along the map forgetting markings n+1, ..., n+extra.
TautClass forget_pullback(const TautClass& x, int extra = 1);

/// Marking i (1-based) becomes marking sigma[i-1].
TautClass relabel(const TautClass& x, const std::vector<int>& sigma);

/// Every generator [Γ, γ] of degree d on Mbar_{g,n}, canonical and sorted by key.
const std::vector<CanonicalStratum>& generators(int g, int n, int d);

/// Result of grafting graphs into the vertices of an outer graph.
struct Graft {
  StableGraph graph;
  std::vector<int> owner;                    // new vertex -> outer vertex
  std::vector<std::vector<int>> vertex_map;  // outer v: inner vertex -> new vertex
  std::vector<std::vector<int>> he_map;      // outer v: inner half-edge -> new half-edge
};

/// Outer half-edges keep their indices; inner edges are appended in outer
/// vertex order.
Graft graft(const StableGraph& outer, const std::vector<const StableGraph*>& inner);

}  // namespace taut
