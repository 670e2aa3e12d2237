#include <algorithm>
#include <mutex>
#include <numeric>
#include <stdexcept>

#include "taut/strata.hpp"

namespace taut {

DecoratedStratum DecoratedStratum::bare(const StableGraph& g) {
  return {g, std::vector<std::vector<int>>(g.num_vertices()), std::vector<int>(g.num_half_edges(), 0)};
}

int DecoratedStratum::vertex_degree(int v) const {
  int d = std::accumulate(kappa[v].begin(), kappa[v].end(), 0);
  for (int h = 0; h < graph.num_half_edges(); ++h)
    if (graph.vertex_of(h) == v) d += psi[h];
  return d;
}

int DecoratedStratum::degree() const {
  int d = graph.num_edges();
  for (const auto& k : kappa) d += std::accumulate(k.begin(), k.end(), 0);
  return d + std::accumulate(psi.begin(), psi.end(), 0);
}

bool DecoratedStratum::vanishes() const {
  std::vector<int> deg(graph.num_vertices(), 0);
  for (int v = 0; v < graph.num_vertices(); ++v)
    deg[v] = std::accumulate(kappa[v].begin(), kappa[v].end(), 0);
  for (int h = 0; h < graph.num_half_edges(); ++h) deg[graph.vertex_of(h)] += psi[h];
  for (int v = 0; v < graph.num_vertices(); ++v)
    if (deg[v] > graph.vertex_dimension(v)) return true;
  return false;
}

Coloring DecoratedStratum::coloring() const { return {kappa, psi}; }

CanonicalStratum canonicalize(const DecoratedStratum& s) {
  Coloring col = s.coloring();
  CanonicalForm cf = canonical_form(s.graph, &col);
  DecoratedStratum out;
  out.graph = std::move(cf.graph);
  out.kappa.resize(s.kappa.size());
  for (size_t v = 0; v < s.kappa.size(); ++v) out.kappa[cf.map.vertex[v]] = s.kappa[v];
  out.psi.resize(s.psi.size());
  for (size_t h = 0; h < s.psi.size(); ++h) out.psi[cf.map.half_edge[h]] = s.psi[h];
  return {std::move(out), std::move(cf.key)};
}

TautClass::TautClass(int g, int n) : g_(g), n_(n) {
  if (g < 0 || n < 0 || 2 * g - 2 + n <= 0)
    throw std::invalid_argument("strata_algebra: unstable ambient (" + std::to_string(g) + ", " +
                                std::to_string(n) + ")");
}

TautClass TautClass::unit(int g, int n) {
  TautClass x(g, n);
  x.add_term(DecoratedStratum::bare(StableGraph::trivial(g, n)), 1);
  return x;
}

TautClass TautClass::psi(int g, int n, int marking) {
  if (marking < 1 || marking > n) throw std::invalid_argument("strata_algebra: marking out of range");
  TautClass x(g, n);
  auto s = DecoratedStratum::bare(StableGraph::trivial(g, n));
  s.psi[marking - 1] = 1;
  x.add_term(s, 1);
  return x;
}

TautClass TautClass::kappa(int g, int n, int a) {
  if (a < 1) throw std::invalid_argument("strata_algebra: kappa index must be positive");
  TautClass x(g, n);
  auto s = DecoratedStratum::bare(StableGraph::trivial(g, n));
  s.kappa[0] = {a};
  x.add_term(s, 1);
  return x;
}

TautClass TautClass::boundary(const StableGraph& gamma) {
  TautClass x(gamma.total_genus(), gamma.num_legs());
  x.add_term(DecoratedStratum::bare(gamma), 1);
  return x;
}

TautClass TautClass::from_stratum(int g, int n, const DecoratedStratum& s, const Rational& c) {
  TautClass x(g, n);
  x.add_term(s, c);
  return x;
}

void TautClass::add_term(const DecoratedStratum& s, const Rational& c) {
  if (c == 0 || s.vanishes()) return;
  if (s.graph.num_legs() != n_ || s.graph.total_genus() != g_)
    throw std::invalid_argument("strata_algebra: term does not live on the ambient space");
  CanonicalStratum cs = canonicalize(s);
  add_canonical(cs.key, cs.stratum, c);
}

void TautClass::add_canonical(const std::vector<int>& key, const DecoratedStratum& s, const Rational& c) {
  if (c == 0) return;
  auto it = terms_.find(key);
  if (it == terms_.end()) {
    terms_.emplace(key, Entry{s, c});
    return;
  }
  it->second.coeff += c;
  if (it->second.coeff == 0) terms_.erase(it);
}

void TautClass::check_ambient(const TautClass& other) const {
  if (g_ != other.g_ || n_ != other.n_)
    throw std::invalid_argument("strata_algebra: ambient mismatch (" + std::to_string(g_) + "," +
                                std::to_string(n_) + ") vs (" + std::to_string(other.g_) + "," +
                                std::to_string(other.n_) + ")");
}

TautClass& TautClass::operator+=(const TautClass& other) {
  check_ambient(other);
  for (const auto& [k, e] : other.terms_) add_canonical(k, e.stratum, e.coeff);
  return *this;
}

TautClass& TautClass::operator-=(const TautClass& other) {
  check_ambient(other);
  for (const auto& [k, e] : other.terms_) add_canonical(k, e.stratum, -e.coeff);
  return *this;
}

TautClass& TautClass::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [_, e] : terms_) e.coeff *= c;
  return *this;
}

bool operator==(const TautClass& a, const TautClass& b) {
  if (a.g_ != b.g_ || a.n_ != b.n_ || a.terms_.size() != b.terms_.size()) return false;
  auto i = a.terms_.begin();
  for (auto j = b.terms_.begin(); j != b.terms_.end(); ++i, ++j)
    if (i->first != j->first || i->second.coeff != j->second.coeff) return false;
  return true;
}

TautClass TautClass::degree_part(int d) const {
  TautClass out(g_, n_);
  for (const auto& [k, e] : terms_)
    if (e.stratum.degree() == d) out.terms_.emplace(k, e);
  return out;
}

int TautClass::max_degree() const {
  int d = -1;
  for (const auto& [_, e] : terms_) d = std::max(d, e.stratum.degree());
  return d;
}

Graft graft(const StableGraph& outer, const std::vector<const StableGraph*>& inner) {
  const int nv = outer.num_vertices();
  const int n = outer.num_legs();
  if (static_cast<int>(inner.size()) != nv)
    throw std::invalid_argument("strata_algebra/graft: one inner graph per vertex required");
  Graft out;
  out.vertex_map.resize(nv);
  out.he_map.resize(nv);
  int total_edges = outer.num_edges();
  for (int v = 0; v < nv; ++v) total_edges += inner[v]->num_edges();
  std::vector<int> he_vertex(n + 2 * total_edges, -1);
  std::vector<int> genera;
  int edge_cursor = outer.num_edges();
  for (int v = 0; v < nv; ++v) {
    const StableGraph& G = *inner[v];
    std::vector<int> slots = outer.half_edges_at(v);
    if (G.num_legs() != static_cast<int>(slots.size()))
      throw std::invalid_argument("strata_algebra/graft: slot count mismatch at vertex " + std::to_string(v));
    const int base = static_cast<int>(genera.size());
    for (int x = 0; x < G.num_vertices(); ++x) {
      genera.push_back(G.genus(x));
      out.owner.push_back(v);
      out.vertex_map[v].push_back(base + x);
    }
    out.he_map[v].resize(G.num_half_edges());
    for (int j = 0; j < G.num_legs(); ++j) {
      out.he_map[v][j] = slots[j];
      he_vertex[slots[j]] = base + G.vertex_of(j);
    }
    for (int e = 0; e < G.num_edges(); ++e, ++edge_cursor) {
      for (int s = 0; s < 2; ++s) {
        int nh = n + 2 * edge_cursor + s;
        out.he_map[v][G.half_edge(e, s)] = nh;
        he_vertex[nh] = base + G.vertex_of(G.half_edge(e, s));
      }
    }
  }
  std::vector<int> legs(he_vertex.begin(), he_vertex.begin() + n);
  std::vector<std::pair<int, int>> edges(total_edges);
  for (int e = 0; e < total_edges; ++e) edges[e] = {he_vertex[n + 2 * e], he_vertex[n + 2 * e + 1]};
  out.graph = StableGraph::unchecked(std::move(genera), std::move(legs), std::move(edges));
  return out;
}

TautClass compose_at_vertices(const StableGraph& gamma, const std::vector<TautClass>& classes) {
  const int nv = gamma.num_vertices();
  if (static_cast<int>(classes.size()) != nv)
    throw std::invalid_argument("strata_algebra/compose_at_vertices: one class per vertex required");
  for (int v = 0; v < nv; ++v)
    if (classes[v].genus() != gamma.genus(v) || classes[v].markings() != gamma.valence(v))
      throw std::invalid_argument("strata_algebra/compose_at_vertices: slot-count mismatch at vertex " +
                                  std::to_string(v));
  TautClass out(gamma.total_genus(), gamma.num_legs());
  std::vector<const TautClass::Entry*> pick(nv);
  auto rec = [&](auto&& self, int v) -> void {
    if (v == nv) {
      std::vector<const StableGraph*> inner(nv);
      Rational c = 1;
      for (int w = 0; w < nv; ++w) {
        inner[w] = &pick[w]->stratum.graph;
        c *= pick[w]->coeff;
      }
      Graft gr = graft(gamma, inner);
      DecoratedStratum s = DecoratedStratum::bare(gr.graph);
      for (int w = 0; w < nv; ++w) {
        const DecoratedStratum& in = pick[w]->stratum;
        for (int x = 0; x < in.graph.num_vertices(); ++x) s.kappa[gr.vertex_map[w][x]] = in.kappa[x];
        for (int h = 0; h < in.graph.num_half_edges(); ++h) s.psi[gr.he_map[w][h]] = in.psi[h];
      }
      out.add_term(s, c);
      return;
    }
    for (const auto& [_, e] : classes[v].terms()) {
      pick[v] = &e;
      self(self, v + 1);
    }
  };
  rec(rec, 0);
  return out;
}

TautClass relabel(const TautClass& x, const std::vector<int>& sigma) {
  const int n = x.markings();
  if (static_cast<int>(sigma.size()) != n)
    throw std::invalid_argument("strata_algebra/relabel: permutation size mismatch");
  std::vector<int> check(sigma);
  std::sort(check.begin(), check.end());
  for (int i = 0; i < n; ++i)
    if (check[i] != i + 1) throw std::invalid_argument("strata_algebra/relabel: not a permutation");
  TautClass out(x.genus(), n);
  for (const auto& [_, e] : x.terms()) {
    const StableGraph& G = e.stratum.graph;
    std::vector<int> legs(n);
    for (int i = 0; i < n; ++i) legs[sigma[i] - 1] = G.vertex_of(i);
    std::vector<std::pair<int, int>> edges(G.num_edges());
    for (int k = 0; k < G.num_edges(); ++k) edges[k] = G.edge(k);
    DecoratedStratum s{StableGraph::unchecked(G.genera(), legs, edges), e.stratum.kappa, e.stratum.psi};
    for (int i = 0; i < n; ++i) s.psi[sigma[i] - 1] = e.stratum.psi[i];
    out.add_term(s, e.coeff);
  }
  return out;
}

namespace {

void partitions(int total, int max_part, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (total == 0) {
    std::vector<int> p(cur);
    std::sort(p.begin(), p.end());
    out.push_back(p);
    return;
  }
  for (int a = std::min(total, max_part); a >= 1; --a) {
    cur.push_back(a);
    partitions(total - a, a, cur, out);
    cur.pop_back();
  }
}

void distributions(int total, int slots, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == slots - 1) {
    cur.push_back(total);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int x = 0; x <= total; ++x) {
    cur.push_back(x);
    distributions(total - x, slots, cur, out);
    cur.pop_back();
  }
}

struct VertexDecoration {
  std::vector<int> kappa;
  std::vector<int> psi;  // aligned with half_edges_at(v)
};

std::vector<VertexDecoration> vertex_decorations(int valence, int degree) {
  std::vector<VertexDecoration> out;
  for (int s = 0; s <= degree; ++s) {
    std::vector<std::vector<int>> ks;
    std::vector<int> cur;
    partitions(s, s, cur, ks);
    std::vector<std::vector<int>> ps;
    if (valence == 0) {
      if (degree - s == 0) ps.push_back({});
    } else {
      distributions(degree - s, valence, cur, ps);
    }
    for (const auto& k : ks)
      for (const auto& p : ps) out.push_back({k, p});
  }
  return out;
}

}  // namespace

const std::vector<CanonicalStratum>& generators(int g, int n, int d) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, std::vector<CanonicalStratum>> cache;
  {
    std::lock_guard lock(mu);
    auto it = cache.find({g, n, d});
    if (it != cache.end()) return it->second;
  }
  std::map<std::vector<int>, DecoratedStratum> found;
  for (const auto& G : enumerate_stable_graphs(g, n)) {
    const int r = d - G.num_edges();
    if (r < 0) continue;
    const int nv = G.num_vertices();
    std::vector<std::vector<int>> slots(nv);
    for (int v = 0; v < nv; ++v) slots[v] = G.half_edges_at(v);
    DecoratedStratum s = DecoratedStratum::bare(G);
    auto rec = [&](auto&& self, int v, int left) -> void {
      if (v == nv) {
        if (left != 0) return;
        CanonicalStratum cs = canonicalize(s);
        found.emplace(std::move(cs.key), std::move(cs.stratum));
        return;
      }
      for (int t = 0; t <= std::min(left, G.vertex_dimension(v)); ++t) {
        for (const auto& dec : vertex_decorations(static_cast<int>(slots[v].size()), t)) {
          s.kappa[v] = dec.kappa;
          for (size_t j = 0; j < slots[v].size(); ++j) s.psi[slots[v][j]] = dec.psi[j];
          self(self, v + 1, left - t);
        }
      }
      s.kappa[v].clear();
      for (int h : slots[v]) s.psi[h] = 0;
    };
    rec(rec, 0, r);
  }
  std::vector<CanonicalStratum> out;
  out.reserve(found.size());
  for (auto& [k, s] : found) out.push_back({s, k});
  std::lock_guard lock(mu);
  auto [it, _] = cache.emplace(std::make_tuple(g, n, d), std::move(out));
  return it->second;
}

}  // namespace taut
