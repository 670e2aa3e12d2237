#include <random>

#include "doctest.h"
#include "taut/intersect.hpp"
#include "taut/strata.hpp"

using namespace taut;

namespace {

// genus-0 two-vertex graph on n markings with `left` (1-based) on vertex 0
StableGraph split0(int n, const std::vector<int>& left) {
  std::vector<int> legs(n, 1);
  for (int i : left) legs[i - 1] = 0;
  return StableGraph({0, 0}, legs, {{0, 1}});
}

TautClass psi_power(int g, int n, int marking, int a) {
  StableGraph G({g}, std::vector<int>(n, 0), {});
  auto s = DecoratedStratum::bare(G);
  s.psi[marking - 1] = a;
  return TautClass::from_stratum(g, n, s);
}

TautClass gen_class(int g, int n, const CanonicalStratum& c) {
  TautClass x(g, n);
  x.add_canonical(c.key, c.stratum, 1);
  return x;
}

}  // namespace

TEST_CASE("generator counts") {
  CHECK(generators(0, 4, 0).size() == 1);
  CHECK(generators(0, 4, 1).size() == 8);
  CHECK(generators(1, 1, 1).size() == 3);
  for (auto [g, n] : std::vector<std::pair<int, int>>{{0, 5}, {1, 2}, {2, 1}})
    for (int d = 0; d <= 3 * g - 3 + n; ++d)
      for (const auto& c : generators(g, n, d)) {
        CHECK(c.stratum.degree() == d);
        CHECK(canonicalize(c.stratum).key == c.key);
      }
}

TEST_CASE("class arithmetic") {
  auto x = TautClass::psi(0, 5, 1) + TautClass::psi(0, 5, 2);
  CHECK((x - TautClass::psi(0, 5, 2)) == TautClass::psi(0, 5, 1));
  CHECK((x - x).is_zero());
  CHECK((x * Rational(0)).is_zero());
  CHECK(x.max_degree() == 1);
  CHECK(TautClass(0, 5).max_degree() == -1);
  CHECK((x + TautClass::unit(0, 5)).degree_part(0) == TautClass::unit(0, 5));
  CHECK_THROWS(TautClass::psi(0, 5, 1) + TautClass::psi(0, 4, 1));
  // unreduced fractions compare wrongly, so classes must only see reduced ones
  CHECK(ratio(4, 2) == 2);
  CHECK(to_string(ratio(-2, 4)) == "-1/2");
  CHECK(TautClass::psi(0, 5, 1) * ratio(6, 3) == TautClass::psi(0, 5, 1) * Rational(2));
}

TEST_CASE("boundary self-intersections") {
  auto d12 = TautClass::boundary(split0(5, {1, 2}));
  CHECK(pair(d12, d12) == -1);
  auto a = TautClass::boundary(split0(4, {1, 2}));
  auto b = TautClass::boundary(split0(4, {1, 3}));
  CHECK(multiply(a, b).is_zero());
  CHECK(multiply(a, a).is_zero());  // degree 2 on a curve

  StableGraph loop2({0}, {0, 0}, {{0, 0}});
  auto irr = TautClass::boundary(loop2);
  CHECK(pair(irr, irr) == 0);
  StableGraph rat({1, 0}, {1, 1}, {{0, 1}});
  auto d0 = TautClass::boundary(rat);
  CHECK(pair(d0, d0) == Rational(-1, 24));
  CHECK(pair(d0, irr) == 1);  // no automorphism division
}

TEST_CASE("psi products and known relations") {
  CHECK(multiply(TautClass::psi(0, 5, 1), TautClass::psi(0, 5, 1)) == psi_power(0, 5, 1, 2));
  CHECK(evaluate(multiply(TautClass::psi(0, 5, 1), TautClass::boundary(split0(5, {1, 2})))) == 0);
  CHECK(evaluate(multiply(TautClass::psi(0, 5, 3), TautClass::boundary(split0(5, {1, 2})))) == 1);
  // ψ_1 = D_{1a|bc} on Mbar_{0,4}, ψ_1 = δ_irr/24 on Mbar_{1,1}
  CHECK(equals_pairing(TautClass::psi(0, 4, 1), TautClass::boundary(split0(4, {1, 2}))).equal);
  StableGraph loop({0}, {0}, {{0, 0}});
  CHECK(equals_pairing(TautClass::psi(1, 1, 1), TautClass::boundary(loop) * Rational(1, 24)).equal);
  CHECK_FALSE(equals_pairing(TautClass::psi(1, 1, 1), TautClass::boundary(loop)).equal);
}

TEST_CASE("product is commutative and associative on pairings") {
  std::mt19937 rng(11);
  for (auto [g, n] : std::vector<std::pair<int, int>>{{0, 6}, {1, 3}}) {
    const auto& G1 = generators(g, n, 1);
    for (int t = 0; t < 12; ++t) {
      auto a = gen_class(g, n, G1[rng() % G1.size()]);
      auto b = gen_class(g, n, G1[rng() % G1.size()]);
      auto c = gen_class(g, n, G1[rng() % G1.size()]);
      Rational abc = evaluate(multiply(multiply(a, b), c));
      CHECK(evaluate(multiply(a, multiply(b, c))) == abc);
      CHECK(evaluate(multiply(multiply(c, a), b)) == abc);
      CHECK(pair(multiply(a, b), c) == abc);
    }
  }
}

TEST_CASE("forgetful pushforward") {
  CHECK(forget_pushforward(psi_power(1, 2, 2, 2)) == TautClass::kappa(1, 1, 1));
  CHECK(forget_pushforward(TautClass::psi(1, 2, 2)) == TautClass::unit(1, 1));
  CHECK(forget_pushforward(TautClass::unit(1, 2)).is_zero());
  CHECK(forget_pushforward(TautClass::psi(0, 5, 5)) == TautClass::unit(0, 4) * Rational(2));
  // the boundary divisor D_{1,5} maps isomorphically onto Mbar_{0,4}
  CHECK(forget_pushforward(TautClass::boundary(split0(5, {1, 5}))) == TautClass::unit(0, 4));
  // ψ_2^5 pushes to κ_4, whose integral is <τ_0 τ_5>_2 = <τ_4>_2
  CHECK(evaluate(forget_pushforward(psi_power(2, 2, 2, 5))) == psi_integral(2, {4}));
  CHECK_THROWS_AS(forget_pushforward(TautClass::unit(0, 3)), std::invalid_argument);
}

TEST_CASE("forgetful pullback") {
  auto d15 = TautClass::boundary(split0(5, {1, 5}));
  CHECK(forget_pullback(TautClass::psi(0, 4, 1)) == TautClass::psi(0, 5, 1) - d15);
  CHECK(forget_pullback(TautClass::unit(1, 1), 2) == TautClass::unit(1, 3));
  auto k = forget_pullback(TautClass::kappa(1, 1, 1));
  CHECK(k == TautClass::kappa(1, 2, 1) - TautClass::psi(1, 2, 2));

  // ring map, checked on pairings
  for (auto [g, n] : std::vector<std::pair<int, int>>{{0, 5}, {1, 2}}) {
    const auto& G1 = generators(g, n, 1);
    for (size_t i = 0; i < G1.size(); ++i)
      for (size_t j = i; j < G1.size(); j += 3) {
        auto a = gen_class(g, n, G1[i]);
        auto b = gen_class(g, n, G1[j]);
        auto lhs = forget_pullback(multiply(a, b));
        auto rhs = multiply(forget_pullback(a), forget_pullback(b));
        CHECK(equals_pairing(lhs, rhs).equal);
      }
  }
}

TEST_CASE("projection formulas") {
  for (auto [g, n] : std::vector<std::pair<int, int>>{{0, 4}, {1, 1}, {1, 2}, {2, 1}}) {
    for (int d = 0; d <= 3 * g - 3 + n; ++d) {
      for (const auto& c : generators(g, n, d)) {
        auto x = gen_class(g, n, c);
        auto up = forget_pullback(x);
        CHECK(forget_pushforward(up).is_zero());
        auto lhs = forget_pushforward(multiply(TautClass::psi(g, n + 1, n + 1), up));
        CHECK(equals_pairing(lhs, x * Rational(2 * g - 2 + n)).equal);
      }
    }
  }
}

TEST_CASE("relabel") {
  auto d = TautClass::boundary(split0(4, {1, 2}));
  CHECK(relabel(d, {3, 2, 1, 4}) == TautClass::boundary(split0(4, {2, 3})));
  CHECK(relabel(TautClass::psi(0, 5, 1), {2, 1, 3, 4, 5}) == TautClass::psi(0, 5, 2));
  CHECK(relabel(d, {2, 1, 4, 3}) == d);
}

TEST_CASE("compose at vertices") {
  StableGraph G = split0(5, {1, 2});
  // vertex 1 has legs 3,4,5 then the node
  auto x = compose_at_vertices(G, {TautClass::unit(0, 3), TautClass::psi(0, 4, 4)});
  auto s = DecoratedStratum::bare(G);
  s.psi[G.half_edge(0, 1)] = 1;
  CHECK(x == TautClass::from_stratum(0, 5, s));
  CHECK(evaluate(x) == 1);
  auto y = compose_at_vertices(G, {TautClass::unit(0, 3), TautClass::boundary(split0(4, {1, 2}))});
  CHECK(evaluate(y) == 1);
  CHECK(y.terms().begin()->second.stratum.graph.num_edges() == 2);
}
