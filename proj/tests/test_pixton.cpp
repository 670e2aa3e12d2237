#include <random>
#include <set>

#include "doctest.h"
#include "taut/intersect.hpp"
#include "taut/pixton.hpp"

using namespace taut;

namespace {

// Scans every edge residue instead of solving on a spanning tree.
std::set<WeightingModR> brute_weightings(const StableGraph& G, const std::vector<int>& mu, int r) {
  std::set<WeightingModR> out;
  const int n = G.num_legs();
  const int ne = G.num_edges();
  WeightingModR w(G.num_half_edges());
  for (int i = 0; i < n; ++i) w[i] = ((mu[i] + 1) % r + r) % r;
  std::vector<int> t(ne, 0);
  while (true) {
    for (int e = 0; e < ne; ++e) {
      w[G.half_edge(e, 0)] = t[e];
      w[G.half_edge(e, 1)] = (r - t[e]) % r;
    }
    bool ok = true;
    for (int v = 0; v < G.num_vertices() && ok; ++v) {
      long s = 0;
      for (int h : G.half_edges_at(v)) s += w[h];
      long target = 2 * G.genus(v) - 2 + G.valence(v);
      ok = ((s - target) % r + r) % r == 0;
    }
    if (ok) out.insert(w);
    int e = 0;
    while (e < ne && ++t[e] == r) t[e++] = 0;
    if (e == ne) break;
  }
  return out;
}

// Degree one by hand: the trivial graph gives -κ_1 + Σ m̃_i² ψ_i, a separating
// edge cutting off the markings S in genus 0 has w w' ≡ -(1+m_S)² mod r, and
// the loop averages t(r-t) over t, i.e. (r²-1)/6, halved by its automorphism.
TautClass genus_one_degree_one(const std::vector<int>& mu) {
  const int n = static_cast<int>(mu.size());
  TautClass out = TautClass::kappa(1, n, 1) * Rational(-1);
  for (int i = 0; i < n; ++i) out += TautClass::psi(1, n, i + 1) * Rational((mu[i] + 1) * (mu[i] + 1));
  for (unsigned S = 0; S < (1u << n); ++S) {
    if (__builtin_popcount(S) < 2) continue;
    std::vector<int> legs(n);
    int mS = 0;
    for (int i = 0; i < n; ++i) {
      legs[i] = (S >> i) & 1 ? 1 : 0;
      if ((S >> i) & 1) mS += mu[i];
    }
    out -= TautClass::boundary(StableGraph({1, 0}, legs, {{0, 1}})) * Rational((1 + mS) * (1 + mS));
  }
  out -= TautClass::boundary(StableGraph({0}, std::vector<int>(n, 0), {{0, 0}})) * Rational(1, 12);
  return out;
}

}  // namespace

TEST_CASE("weighting counts on small graphs") {
  for (int r : {1, 2, 5, 9}) {
    CHECK(admissible_weightings(StableGraph::trivial(1, 2), {1, -1}, r).size() == 1);
    StableGraph one({1, 0}, {1, 1}, {{0, 1}});
    CHECK(admissible_weightings(one, {1, -1}, r).size() == 1);
    StableGraph banana({0, 0}, {0, 1}, {{0, 1}, {0, 1}});
    CHECK(admissible_weightings(banana, {1, -1}, r).size() == static_cast<size_t>(r));
  }
  // parts not summing to 2g-2 break the vertex conditions for most r
  StableGraph one({1, 0}, {1, 1}, {{0, 1}});
  CHECK(admissible_weightings(one, {1, 0}, 5).empty());
  StableGraph banana({0, 0}, {0, 1}, {{0, 1}, {0, 1}});
  CHECK(admissible_weightings(banana, {1, 0}, 5).empty());
  auto w = admissible_weightings(one, {1, -1}, 7).front();
  CHECK(w == WeightingModR{2, 0, 1, 6});
}

TEST_CASE("spanning-tree weightings agree with a full scan") {
  std::mt19937 rng(5);
  int checked = 0;
  for (auto [g, mu] : std::vector<std::pair<int, std::vector<int>>>{
           {1, {1, -1}}, {1, {2, -1, -1}}, {2, {3, -1}}, {2, {2}}, {2, {1, 1}}, {0, {1, -1, -2, 0}}}) {
    for (const auto& G : enumerate_stable_graphs(g, static_cast<int>(mu.size()))) {
      if (G.num_edges() > 4) continue;
      for (int r : {3, 4, 6}) {
        auto fast = admissible_weightings(G, mu, r);
        std::set<WeightingModR> a(fast.begin(), fast.end());
        CHECK(a.size() == fast.size());
        CHECK(a == brute_weightings(G, mu, r));
        long expect = 1;
        for (int i = 0; i < G.h1(); ++i) expect *= r;
        CHECK(static_cast<long>(fast.size()) == expect);
        ++checked;
      }
    }
  }
  CHECK(checked > 50);
}

TEST_CASE("degree zero is the unit") {
  for (auto [g, mu] : std::vector<std::pair<int, std::vector<int>>>{
           {0, {1, -1, -2}}, {1, {1, -1}}, {1, {0}}, {2, {3, -1}}, {2, {2}}}) {
    const int n = static_cast<int>(mu.size());
    CHECK(pixton_class(g, mu, 0) == TautClass::unit(g, n));
    for (int r : {1, 3, 8}) CHECK(pixton_fixed_r(g, mu, 0, r) == TautClass::unit(g, n));
  }
}

TEST_CASE("genus one, degree one, closed form") {
  for (std::vector<int> mu : {std::vector<int>{1, -1}, {2, -2}, {2, -1, -1}, {0, 0}, {3, -1, -2}, {0}})
    CHECK(pixton_class(1, mu, 1) == genus_one_degree_one(mu));
}

TEST_CASE("fixed-r coefficients are polynomial in r") {
  // separating edge on Mbar_{1,2} with both legs in genus 0: w w' = (r-1)·1
  StableGraph one({1, 0}, {1, 1}, {{0, 1}});
  auto key = canonicalize(DecoratedStratum::bare(one)).key;
  std::vector<int> rs{5, 7, 11};
  std::vector<Rational> ys;
  for (int r : rs) {
    auto x = pixton_fixed_r(1, {1, -1}, 1, r);
    REQUIRE(x.terms().count(key));
    ys.push_back(x.terms().at(key).coeff);
    CHECK(ys.back() == Rational(r - 1));
  }
  CHECK(lagrange_at(std::vector<int>{5, 7}, {ys[0], ys[1]}, Rational(11)) == ys[2]);
  CHECK(lagrange_at_zero(std::vector<int>{5, 7}, {ys[0], ys[1]}) == -1);
}

TEST_CASE("interpolation records its samples and validates them") {
  auto res = pixton_class_detailed(1, {2, -1, -1}, 1);
  CHECK(res.holdout_r.size() == 3);
  CHECK(res.fit_r.size() >= 4);
  CHECK(res.fit_r.front() == 2 * (3 + 0 + 0 + 1 + 1));
  CHECK(res.holdout_r.front() == res.fit_r.back() + 1);
  PixtonOptions tiny;
  tiny.max_samples = 5;
  CHECK_THROWS_AS(pixton_class(1, {4, -1, -1, -1, -1}, 1, tiny), InterpolationError);
}

TEST_CASE("relabeling markings") {
  auto a = pixton_fixed_r(1, {2, -1, -1}, 1, 7);
  auto b = pixton_fixed_r(1, {-1, 2, -1}, 1, 7);
  CHECK(relabel(a, {2, 1, 3}) == b);
  auto c = pixton_fixed_r(1, {-1, -1, 2}, 2, 9);
  auto d = pixton_fixed_r(1, {2, -1, -1}, 2, 9);
  CHECK(relabel(d, {3, 1, 2}) == c);
  CHECK(pixton_class(1, {-1, 2, -1}, 1) == relabel(pixton_class(1, {2, -1, -1}, 1), {2, 1, 3}));
}

TEST_CASE("vanishing above degree g") {
  CHECK(pixton_class(0, {1, -1, -2}, 1).is_zero());
  CHECK(evaluate(pixton_class(0, {1, 1, -2, -2}, 1)) == 0);
  auto p = pixton_class(0, {2, -1, -1, -2}, 1);
  CHECK(equals_pairing(p, TautClass(0, 4), 1).equal);
  auto v = equals_pairing(pixton_class(0, {1, 0, -1, -1, -1}, 1), TautClass(0, 5), 1);
  CHECK(v.equal);
  CHECK(equals_pairing(pixton_class(1, {1, -1}, 2), TautClass(1, 2), 2).equal);
  CHECK(equals_pairing(pixton_class(1, {2, -1, -1}, 2), TautClass(1, 3), 2).equal);
  CHECK_FALSE(equals_pairing(pixton_class(1, {2, -1, -1}, 1), TautClass(1, 3), 1).equal);
  CHECK(pixton_class(1, {1, -1}, 3).is_zero());
}
