// Pushforward and pullback along the forgetful map Mbar_{g,n+1} -> Mbar_{g,n}.
#include <algorithm>
#include <array>
#include <numeric>
#include <stdexcept>

#include "taut/strata.hpp"

namespace taut {

namespace {

// Editable view of a decorated stratum: legs and edges as explicit lists.
struct Loose {
  std::vector<int> genera;
  std::vector<std::vector<int>> kappa;
  std::vector<int> leg_vertex, leg_psi;
  std::vector<std::array<int, 2>> edge_vertex, edge_psi;

  static Loose from(const DecoratedStratum& s) {
    const StableGraph& G = s.graph;
    Loose l{G.genera(), s.kappa, {}, {}, {}, {}};
    for (int i = 0; i < G.num_legs(); ++i) {
      l.leg_vertex.push_back(G.vertex_of(i));
      l.leg_psi.push_back(s.psi[i]);
    }
    for (int e = 0; e < G.num_edges(); ++e) {
      int h0 = G.half_edge(e, 0), h1 = G.half_edge(e, 1);
      l.edge_vertex.push_back({G.vertex_of(h0), G.vertex_of(h1)});
      l.edge_psi.push_back({s.psi[h0], s.psi[h1]});
    }
    return l;
  }

  DecoratedStratum build() const {
    std::vector<std::pair<int, int>> edges;
    for (auto& ev : edge_vertex) edges.emplace_back(ev[0], ev[1]);
    DecoratedStratum s{StableGraph::unchecked(genera, leg_vertex, edges), kappa, {}};
    s.psi = leg_psi;
    for (auto& ep : edge_psi) {
      s.psi.push_back(ep[0]);
      s.psi.push_back(ep[1]);
    }
    for (auto& k : s.kappa) std::sort(k.begin(), k.end());
    return s;
  }

  void remove_vertex(int v) {
    genera.erase(genera.begin() + v);
    kappa.erase(kappa.begin() + v);
    auto fix = [v](int& x) {
      if (x > v) --x;
    };
    for (int& x : leg_vertex) fix(x);
    for (auto& ev : edge_vertex) {
      fix(ev[0]);
      fix(ev[1]);
    }
  }
};

}  // namespace

TautClass forget_pushforward(const TautClass& x) {
  const int g = x.genus();
  const int n = x.markings() - 1;
  if (n < 0 || 2 * g - 2 + n <= 0)
    throw std::invalid_argument("strata_algebra/forget_pushforward: target space is unstable");
  TautClass out(g, n);
  for (const auto& [_, entry] : x.terms()) {
    const DecoratedStratum& s = entry.stratum;
    const StableGraph& G = s.graph;
    const int v = G.vertex_of(n);
    Loose base = Loose::from(s);
    const int b = base.leg_psi[n];
    base.leg_vertex.pop_back();
    base.leg_psi.pop_back();
    const int valence = G.valence(v) - 1;

    if (2 * G.genus(v) - 2 + valence <= 0) {
      // v becomes unstable and is contracted away; it carries no decorations
      if (b != 0 || !s.kappa[v].empty()) continue;
      std::vector<int> others;
      for (int h : G.half_edges_at(v))
        if (h != n) others.push_back(h);
      if (others.size() != 2) throw std::logic_error("strata_algebra/forget_pushforward: bad unstable vertex");
      Loose l = base;
      int h1 = others[0], h2 = others[1];
      if (G.is_leg(h1) && G.is_leg(h2))
        throw std::logic_error("strata_algebra/forget_pushforward: unstable target");
      if (G.is_leg(h1) || G.is_leg(h2)) {
        int leg = G.is_leg(h1) ? h1 : h2;
        int side = G.is_leg(h1) ? h2 : h1;
        int e = G.edge_of(side);
        int sp = G.partner(side) == G.half_edge(e, 0) ? 0 : 1;
        if (s.psi[leg] != 0) continue;
        l.leg_vertex[leg] = l.edge_vertex[e][sp];
        l.leg_psi[leg] = l.edge_psi[e][sp];
        l.edge_vertex.erase(l.edge_vertex.begin() + e);
        l.edge_psi.erase(l.edge_psi.begin() + e);
      } else {
        int e1 = G.edge_of(h1), e2 = G.edge_of(h2);
        if (e1 == e2) throw std::logic_error("strata_algebra/forget_pushforward: unstable target");
        int s1 = G.partner(h1) == G.half_edge(e1, 0) ? 0 : 1;
        int s2 = G.partner(h2) == G.half_edge(e2, 0) ? 0 : 1;
        std::array<int, 2> nv{l.edge_vertex[e1][s1], l.edge_vertex[e2][s2]};
        std::array<int, 2> np{l.edge_psi[e1][s1], l.edge_psi[e2][s2]};
        for (int e : {std::max(e1, e2), std::min(e1, e2)}) {
          l.edge_vertex.erase(l.edge_vertex.begin() + e);
          l.edge_psi.erase(l.edge_psi.begin() + e);
        }
        l.edge_vertex.push_back(nv);
        l.edge_psi.push_back(np);
      }
      l.remove_vertex(v);
      out.add_term(l.build(), entry.coeff);
      continue;
    }

    // v stays stable: push forward on its own factor
    const std::vector<int> E = s.kappa[v];
    const int m = static_cast<int>(E.size());
    const Rational kappa0 = 2 * G.genus(v) - 2 + valence;
    for (unsigned J = 0; J < (1u << m); ++J) {
      if (b == 0 && J == 0) continue;
      int sum = 0;
      std::vector<int> rest;
      for (int j = 0; j < m; ++j) {
        if ((J >> j) & 1)
          sum += E[j];
        else
          rest.push_back(E[j]);
      }
      int idx = b == 0 ? sum - 1 : b - 1 + sum;
      Loose l = base;
      l.kappa[v] = rest;
      Rational c = entry.coeff;
      if (idx == 0)
        c *= kappa0;
      else
        l.kappa[v].push_back(idx);
      out.add_term(l.build(), c);
    }
    if (b == 0) {
      for (int h : G.half_edges_at(v)) {
        if (h == n || s.psi[h] == 0) continue;
        DecoratedStratum t = s;
        --t.psi[h];
        Loose l = Loose::from(t);
        l.leg_vertex.pop_back();
        l.leg_psi.pop_back();
        out.add_term(l.build(), entry.coeff);
      }
    }
  }
  return out;
}

namespace {

TautClass pullback_once(const TautClass& x) {
  const int g = x.genus();
  const int n = x.markings();
  TautClass out(g, n + 1);
  for (const auto& [_, entry] : x.terms()) {
    const DecoratedStratum& s = entry.stratum;
    const StableGraph& G = s.graph;
    for (int v = 0; v < G.num_vertices(); ++v) {
      // new point on v: κ_e -> κ_e - ψ_new^e
      const std::vector<int>& E = s.kappa[v];
      const int m = static_cast<int>(E.size());
      for (unsigned J = 0; J < (1u << m); ++J) {
        Loose l = Loose::from(s);
        int sum = 0;
        std::vector<int> rest;
        for (int j = 0; j < m; ++j) {
          if ((J >> j) & 1)
            sum += E[j];
          else
            rest.push_back(E[j]);
        }
        l.kappa[v] = rest;
        l.leg_vertex.push_back(v);
        l.leg_psi.push_back(sum);
        out.add_term(l.build(), (__builtin_popcount(J) % 2) ? Rational(-entry.coeff) : entry.coeff);
      }
      // ψ_x -> ψ_x - D_{x,new}: bubble carrying x and the new point
      for (int h : G.half_edges_at(v)) {
        if (s.psi[h] == 0) continue;
        Loose l = Loose::from(s);
        const int u = static_cast<int>(l.genera.size());
        l.genera.push_back(0);
        l.kappa.emplace_back();
        if (G.is_leg(h)) {
          l.leg_vertex[h] = u;
          l.leg_psi[h] = 0;
        } else {
          int e = G.edge_of(h);
          int side = h == G.half_edge(e, 0) ? 0 : 1;
          l.edge_vertex[e][side] = u;
          l.edge_psi[e][side] = 0;
        }
        l.leg_vertex.push_back(u);
        l.leg_psi.push_back(0);
        l.edge_vertex.push_back({v, u});
        l.edge_psi.push_back({s.psi[h] - 1, 0});
        out.add_term(l.build(), -entry.coeff);
      }
    }
  }
  return out;
}

}  // namespace

TautClass forget_pullback(const TautClass& x, int extra) {
  if (extra < 0) throw std::invalid_argument("strata_algebra/forget_pullback: negative marking count");
  TautClass cur = x;
  for (int i = 0; i < extra; ++i) cur = pullback_once(cur);
  return cur;
}

}  // namespace taut
