// Excess-intersection product of decorated strata.
//
// For generators supported on A and B, the fibre product of ξ_A and ξ_B is a
// union of spaces Mbar_Γ where Γ degenerates every vertex of A and carries a
// B-structure, with every edge of Γ coming from A or from B. Summing over
// leg-labelled degenerations G_v of the vertices of A with weight 1/|Aut(G_v)|
// and over all B-structures counts each component exactly once.
#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>

#include "taut/strata.hpp"

namespace taut {

namespace {

struct Structure {
  StableGraph gamma;
  Rational weight;
  std::vector<int> a_owner;  // Γ vertex -> A vertex
  std::vector<int> b_he;     // B half-edge -> Γ half-edge
  std::vector<int> b_owner;  // Γ vertex -> B vertex
  std::vector<int> excess;   // Γ edges shared by A and B
};

const std::vector<Relabeling>& cached_automorphisms(const StableGraph& canonical) {
  static std::mutex mu;
  static std::map<std::vector<int>, std::vector<Relabeling>> cache;
  std::vector<int> key = canonical_form(canonical).key;
  {
    std::lock_guard lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto auts = automorphisms(canonical);
  std::lock_guard lock(mu);
  return cache.emplace(std::move(key), std::move(auts)).first->second;
}

std::vector<Structure> compute_structures(const StableGraph& A, const StableGraph& B) {
  std::vector<Structure> out;
  const int nb = B.num_edges();
  const int na = A.num_edges();
  const int nv = A.num_vertices();
  CanonicalForm cfB = canonical_form(B);
  std::vector<int> inv_b_he(B.num_half_edges()), inv_b_v(B.num_vertices());
  for (int h = 0; h < B.num_half_edges(); ++h) inv_b_he[cfB.map.half_edge[h]] = h;
  for (int v = 0; v < B.num_vertices(); ++v) inv_b_v[cfB.map.vertex[v]] = v;
  const auto& auts = cached_automorphisms(cfB.graph);
  std::vector<int> b_genera = B.genera();
  std::sort(b_genera.begin(), b_genera.end());

  std::vector<const std::vector<StableGraph>*> options(nv);
  for (int v = 0; v < nv; ++v) options[v] = &enumerate_stable_graphs(A.genus(v), A.valence(v));
  std::vector<const StableGraph*> pick(nv);

  auto rec = [&](auto&& self, int v, int new_edges, Rational weight) -> void {
    if (v == nv) {
      const int k = nb - new_edges;
      if (k < 0 || k > na) return;
      Graft gr = graft(A, pick);
      const StableGraph& G = gr.graph;
      // K ranges over k-subsets of A's edges (indices 0..na-1 in Γ)
      std::vector<int> sel(na, 0);
      std::fill(sel.end() - k, sel.end(), 1);
      do {
        std::vector<bool> contract(G.num_edges(), false);
        std::vector<int> T, K;
        for (int e = 0; e < G.num_edges(); ++e) {
          if (e < na && !sel[e])
            contract[e] = true;
          else
            T.push_back(e);
          if (e < na && sel[e]) K.push_back(e);
        }
        std::vector<int> vmap;
        StableGraph GT = contract_edges(G, contract, &vmap);
        if (GT.num_vertices() != B.num_vertices()) continue;
        std::vector<int> gen = GT.genera();
        std::sort(gen.begin(), gen.end());
        if (gen != b_genera) continue;
        CanonicalForm cfT = canonical_form(GT);
        if (cfT.key != cfB.key) continue;
        const int n = G.num_legs();
        for (const auto& sigma : auts) {
          Structure s;
          s.gamma = G;
          s.weight = weight;
          s.a_owner = gr.owner;
          s.excess = K;
          s.b_he.resize(B.num_half_edges());
          for (int ht = 0; ht < GT.num_half_edges(); ++ht) {
            int hb = inv_b_he[sigma.half_edge[cfT.map.half_edge[ht]]];
            int hg = ht < n ? ht : n + 2 * T[(ht - n) / 2] + (ht - n) % 2;
            s.b_he[hb] = hg;
          }
          s.b_owner.resize(G.num_vertices());
          for (int w = 0; w < G.num_vertices(); ++w)
            s.b_owner[w] = inv_b_v[sigma.vertex[cfT.map.vertex[vmap[w]]]];
          out.push_back(std::move(s));
        }
      } while (std::next_permutation(sel.begin(), sel.end()));
      return;
    }
    for (const auto& Gv : *options[v]) {
      if (new_edges + Gv.num_edges() > nb) continue;
      pick[v] = &Gv;
      self(self, v + 1, new_edges + Gv.num_edges(),
           weight / Rational(static_cast<unsigned long>(automorphism_order(Gv))));
    }
  };
  rec(rec, 0, 0, Rational(1));
  return out;
}

// Structures for canonical A and B, memoized on their keys.
const std::vector<Structure>& structures(const StableGraph& A, const std::vector<int>& keyA,
                                         const StableGraph& B, const std::vector<int>& keyB) {
  static std::mutex mu;
  static std::map<std::pair<std::vector<int>, std::vector<int>>, std::vector<Structure>> cache;
  auto key = std::make_pair(keyA, keyB);
  {
    std::lock_guard lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto s = compute_structures(A, B);
  std::lock_guard lock(mu);
  return cache.emplace(std::move(key), std::move(s)).first->second;
}

struct Mono {
  std::vector<std::vector<int>> kappa;
  std::vector<int> psi;
  Rational coeff;
};

// A generator transported onto its undecorated canonical graph.
struct Transported {
  StableGraph graph;
  std::vector<int> key;
  std::vector<std::vector<int>> kappa;
  std::vector<int> psi;
};

Transported transport(const DecoratedStratum& s) {
  CanonicalForm cf = canonical_form(s.graph);
  Transported t{cf.graph, cf.key, std::vector<std::vector<int>>(s.kappa.size()), std::vector<int>(s.psi.size())};
  for (size_t v = 0; v < s.kappa.size(); ++v) t.kappa[cf.map.vertex[v]] = s.kappa[v];
  for (size_t h = 0; h < s.psi.size(); ++h) t.psi[cf.map.half_edge[h]] = s.psi[h];
  return t;
}

void expand(const Structure& st, const Transported& a, const Transported& b, const Rational& coeff,
            const std::function<void(const DecoratedStratum&, const Rational&)>& f) {
  const StableGraph& G = st.gamma;
  const int nv = G.num_vertices();
  std::vector<int> dim(nv), used(nv, 0);
  for (int w = 0; w < nv; ++w) dim[w] = G.vertex_dimension(w);
  Mono base{std::vector<std::vector<int>>(nv), std::vector<int>(G.num_half_edges(), 0), coeff * st.weight};
  // A's half-edges keep their indices in Γ
  for (size_t h = 0; h < a.psi.size(); ++h) base.psi[h] += a.psi[h];
  for (size_t h = 0; h < b.psi.size(); ++h) base.psi[st.b_he[h]] += b.psi[h];
  for (int h = 0; h < G.num_half_edges(); ++h) used[G.vertex_of(h)] += base.psi[h];
  for (int w = 0; w < nv; ++w)
    if (used[w] > dim[w]) return;

  // κ factors to distribute: (index, candidate Γ vertices)
  std::vector<std::pair<int, std::vector<int>>> factors;
  for (size_t v = 0; v < a.kappa.size(); ++v) {
    std::vector<int> over;
    for (int w = 0; w < nv; ++w)
      if (st.a_owner[w] == static_cast<int>(v)) over.push_back(w);
    for (int x : a.kappa[v]) factors.emplace_back(x, over);
  }
  for (size_t v = 0; v < b.kappa.size(); ++v) {
    std::vector<int> over;
    for (int w = 0; w < nv; ++w)
      if (st.b_owner[w] == static_cast<int>(v)) over.push_back(w);
    for (int x : b.kappa[v]) factors.emplace_back(x, over);
  }

  Mono cur = base;
  const int nf = static_cast<int>(factors.size());
  const int ne = static_cast<int>(st.excess.size());
  auto rec = [&](auto&& self, int i) -> void {
    if (i < nf) {
      const auto& [x, over] = factors[i];
      for (int w : over) {
        if (used[w] + x > dim[w]) continue;
        used[w] += x;
        cur.kappa[w].push_back(x);
        self(self, i + 1);
        cur.kappa[w].pop_back();
        used[w] -= x;
      }
      return;
    }
    if (i < nf + ne) {
      int e = st.excess[i - nf];
      for (int s = 0; s < 2; ++s) {
        int h = G.half_edge(e, s);
        int w = G.vertex_of(h);
        if (used[w] + 1 > dim[w]) continue;
        ++used[w];
        ++cur.psi[h];
        cur.coeff = -cur.coeff;
        self(self, i + 1);
        cur.coeff = -cur.coeff;
        --cur.psi[h];
        --used[w];
      }
      return;
    }
    DecoratedStratum s{G, cur.kappa, cur.psi};
    for (auto& k : s.kappa) std::sort(k.begin(), k.end());
    f(s, cur.coeff);
  };
  rec(rec, 0);
}

}  // namespace

void for_each_product_term(const TautClass& x, const TautClass& y,
                           const std::function<void(const DecoratedStratum&, const Rational&)>& f) {
  if (x.genus() != y.genus() || x.markings() != y.markings())
    throw std::invalid_argument("strata_algebra/multiply: ambient mismatch");
  std::vector<std::pair<Transported, Rational>> xs, ys;
  for (const auto& [_, e] : x.terms()) xs.emplace_back(transport(e.stratum), e.coeff);
  for (const auto& [_, e] : y.terms()) ys.emplace_back(transport(e.stratum), e.coeff);
  for (const auto& [a, ca] : xs) {
    for (const auto& [b, cb] : ys) {
      const bool swap = a.graph.num_edges() < b.graph.num_edges();
      const Transported& big = swap ? b : a;
      const Transported& small = swap ? a : b;
      Rational c = ca * cb;
      for (const auto& st : structures(big.graph, big.key, small.graph, small.key)) expand(st, big, small, c, f);
    }
  }
}

TautClass multiply(const TautClass& x, const TautClass& y) {
  TautClass out(x.genus(), x.markings());
  for_each_product_term(x, y, [&](const DecoratedStratum& s, const Rational& c) { out.add_term(s, c); });
  return out;
}

}  // namespace taut
