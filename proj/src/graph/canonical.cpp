// Canonical labeling of (colored) stable graphs: color refinement on
// vertices, then exhaustive search over orderings inside each refined cell.
#include <algorithm>
#include <array>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>

#include "taut/stable_graph.hpp"

namespace taut {

namespace {

using Key = std::vector<int>;
using EdgeTuple = std::array<int, 4>;

struct Refined {
  std::vector<int> cls;             // class id per vertex
  std::vector<std::vector<int>> cells;  // vertices per class, classes in order
};

int he_color(const Coloring* c, int h) {
  return (c && !c->half_edge.empty()) ? c->half_edge[h] : 0;
}

const std::vector<int>& vertex_color(const Coloring* c, int v) {
  static const std::vector<int> empty;
  return (c && !c->vertex.empty()) ? c->vertex[v] : empty;
}

std::vector<int> assign_ids(const std::vector<Key>& sigs) {
  std::vector<int> idx(sigs.size());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return sigs[a] < sigs[b]; });
  std::vector<int> id(sigs.size());
  int cur = -1;
  for (size_t k = 0; k < idx.size(); ++k) {
    if (k == 0 || sigs[idx[k]] != sigs[idx[k - 1]]) ++cur;
    id[idx[k]] = cur;
  }
  return id;
}

Refined refine(const StableGraph& g, const Coloring* col) {
  const int nv = g.num_vertices();
  const int n = g.num_legs();
  std::vector<Key> sigs(nv);
  for (int v = 0; v < nv; ++v) {
    Key& s = sigs[v];
    s.push_back(g.genus(v));
    s.push_back(g.valence(v));
    const auto& vc = vertex_color(col, v);
    s.push_back(static_cast<int>(vc.size()));
    s.insert(s.end(), vc.begin(), vc.end());
  }
  for (int h = 0; h < n; ++h) {
    Key& s = sigs[g.vertex_of(h)];
    s.push_back(-1 - h);  // legs are distinguishable
    s.push_back(he_color(col, h));
  }
  std::vector<std::vector<std::pair<int, int>>> loops(nv);
  for (int e = 0; e < g.num_edges(); ++e) {
    if (!g.is_self_edge(e)) continue;
    int a = he_color(col, g.half_edge(e, 0)), b = he_color(col, g.half_edge(e, 1));
    loops[g.edge(e).first].emplace_back(std::min(a, b), std::max(a, b));
  }
  for (int v = 0; v < nv; ++v) {
    std::sort(loops[v].begin(), loops[v].end());
    sigs[v].push_back(-1000000);
    for (auto [a, b] : loops[v]) {
      sigs[v].push_back(a);
      sigs[v].push_back(b);
    }
  }
  std::vector<int> cls = assign_ids(sigs);
  int nclasses = cls.empty() ? 0 : *std::max_element(cls.begin(), cls.end()) + 1;
  while (nclasses < nv) {
    std::vector<std::vector<std::array<int, 3>>> nb(nv);
    for (int e = 0; e < g.num_edges(); ++e) {
      if (g.is_self_edge(e)) continue;
      int h0 = g.half_edge(e, 0), h1 = g.half_edge(e, 1);
      int a = g.vertex_of(h0), b = g.vertex_of(h1);
      nb[a].push_back({cls[b], he_color(col, h0), he_color(col, h1)});
      nb[b].push_back({cls[a], he_color(col, h1), he_color(col, h0)});
    }
    std::vector<Key> s2(nv);
    for (int v = 0; v < nv; ++v) {
      std::sort(nb[v].begin(), nb[v].end());
      s2[v].push_back(cls[v]);
      for (auto& t : nb[v]) s2[v].insert(s2[v].end(), t.begin(), t.end());
    }
    std::vector<int> next = assign_ids(s2);
    int nc = *std::max_element(next.begin(), next.end()) + 1;
    cls = std::move(next);
    if (nc == nclasses) break;
    nclasses = nc;
  }
  Refined r;
  r.cls = cls;
  r.cells.assign(nclasses, {});
  for (int v = 0; v < nv; ++v) r.cells[cls[v]].push_back(v);
  return r;
}

struct Candidate {
  Key key;
  std::vector<int> pos;  // vertex -> new index
};

void edge_tuples(const StableGraph& g, const Coloring* col, const std::vector<int>& pos,
                 std::vector<EdgeTuple>& tuples, std::vector<bool>* flipped) {
  const int ne = g.num_edges();
  tuples.resize(ne);
  if (flipped) flipped->assign(ne, false);
  for (int e = 0; e < ne; ++e) {
    int h0 = g.half_edge(e, 0), h1 = g.half_edge(e, 1);
    std::array<int, 2> a{pos[g.vertex_of(h0)], he_color(col, h0)};
    std::array<int, 2> b{pos[g.vertex_of(h1)], he_color(col, h1)};
    if (b < a) {
      std::swap(a, b);
      if (flipped) (*flipped)[e] = true;
    }
    tuples[e] = {a[0], a[1], b[0], b[1]};
  }
}

Key serialize(const StableGraph& g, const Coloring* col, const std::vector<int>& order,
              const std::vector<int>& pos) {
  Key key;
  key.reserve(8 + 3 * g.num_vertices() + 2 * g.num_legs() + 4 * g.num_edges());
  key.push_back(g.num_legs());
  key.push_back(g.num_vertices());
  key.push_back(g.num_edges());
  for (int v : order) {
    key.push_back(g.genus(v));
    const auto& vc = vertex_color(col, v);
    key.push_back(static_cast<int>(vc.size()));
    key.insert(key.end(), vc.begin(), vc.end());
  }
  for (int h = 0; h < g.num_legs(); ++h) {
    key.push_back(pos[g.vertex_of(h)]);
    key.push_back(he_color(col, h));
  }
  std::vector<EdgeTuple> t;
  edge_tuples(g, col, pos, t, nullptr);
  std::sort(t.begin(), t.end());
  for (auto& x : t) key.insert(key.end(), x.begin(), x.end());
  return key;
}

// Visits every vertex order compatible with the refined cells.
template <class F>
void for_each_order(const Refined& r, F&& visit) {
  std::vector<std::vector<int>> cells = r.cells;
  for (auto& c : cells) std::sort(c.begin(), c.end());
  std::vector<int> order;
  const size_t nc = cells.size();
  auto rec = [&](auto&& self, size_t ci) -> void {
    if (ci == nc) {
      visit(order);
      return;
    }
    auto& cell = cells[ci];
    std::sort(cell.begin(), cell.end());
    do {
      size_t mark = order.size();
      order.insert(order.end(), cell.begin(), cell.end());
      self(self, ci + 1);
      order.resize(mark);
    } while (std::next_permutation(cell.begin(), cell.end()));
  };
  rec(rec, 0);
}

struct Search {
  Key best;
  std::vector<std::vector<int>> best_orders;
};

Search search(const StableGraph& g, const Coloring* col, bool keep_all) {
  Refined r = refine(g, col);
  Search s;
  const int nv = g.num_vertices();
  std::vector<int> pos(nv);
  for_each_order(r, [&](const std::vector<int>& order) {
    for (int i = 0; i < nv; ++i) pos[order[i]] = i;
    Key k = serialize(g, col, order, pos);
    if (s.best_orders.empty() || k < s.best) {
      s.best = std::move(k);
      s.best_orders.clear();
      s.best_orders.push_back(order);
    } else if (k == s.best) {
      if (keep_all || s.best_orders.size() < 1)
        s.best_orders.push_back(order);
      else
        s.best_orders.emplace_back();  // counted only
    }
  });
  return s;
}

struct Built {
  StableGraph graph;
  std::vector<int> he_map;
};

Built build(const StableGraph& g, const Coloring* col, const std::vector<int>& order) {
  const int nv = g.num_vertices();
  const int n = g.num_legs();
  std::vector<int> pos(nv);
  for (int i = 0; i < nv; ++i) pos[order[i]] = i;
  std::vector<int> genera(nv);
  for (int i = 0; i < nv; ++i) genera[i] = g.genus(order[i]);
  std::vector<int> legs(n);
  for (int h = 0; h < n; ++h) legs[h] = pos[g.vertex_of(h)];
  std::vector<EdgeTuple> t;
  std::vector<bool> flipped;
  edge_tuples(g, col, pos, t, &flipped);
  const int ne = g.num_edges();
  std::vector<int> eorder(ne);
  for (int e = 0; e < ne; ++e) eorder[e] = e;
  std::stable_sort(eorder.begin(), eorder.end(), [&](int a, int b) { return t[a] < t[b]; });
  std::vector<std::pair<int, int>> edges(ne);
  std::vector<int> he_map(g.num_half_edges());
  for (int h = 0; h < n; ++h) he_map[h] = h;
  for (int k = 0; k < ne; ++k) {
    int e = eorder[k];
    edges[k] = {t[e][0], t[e][2]};
    int h0 = g.half_edge(e, 0), h1 = g.half_edge(e, 1);
    if (flipped[e]) std::swap(h0, h1);
    he_map[h0] = n + 2 * k;
    he_map[h1] = n + 2 * k + 1;
  }
  return {StableGraph::unchecked(std::move(genera), std::move(legs), std::move(edges)),
          std::move(he_map)};
}

// Automorphisms of a canonical graph that fix every vertex: permutations of
// identical edges and flips of symmetric self-edges.
std::uint64_t edge_symmetry_order(const Key& key, int n, int nv_fields_end, int ne) {
  std::uint64_t order = 1;
  const int base = nv_fields_end + 2 * n;
  int run = 1;
  for (int k = 0; k < ne; ++k) {
    const int* cur = key.data() + base + 4 * k;
    if (cur[0] == cur[2] && cur[1] == cur[3]) order *= 2;
    if (k > 0) {
      const int* prev = cur - 4;
      if (std::equal(cur, cur + 4, prev)) {
        ++run;
        order *= static_cast<std::uint64_t>(run);
        continue;
      }
    }
    run = 1;
  }
  return order;
}

int vertex_fields_end(const Key& key) {
  int nv = key[1];
  int p = 3;
  for (int i = 0; i < nv; ++i) p += 2 + key[p + 1];
  return p;
}

}  // namespace

CanonicalForm canonical_form(const StableGraph& g, const Coloring* colors) {
  Search s = search(g, colors, false);
  Built b = build(g, colors, s.best_orders.front());
  CanonicalForm out;
  out.graph = std::move(b.graph);
  out.map.half_edge = std::move(b.he_map);
  const int nv = g.num_vertices();
  out.map.vertex.resize(nv);
  const auto& order = s.best_orders.front();
  for (int i = 0; i < nv; ++i) out.map.vertex[order[i]] = i;
  out.automorphisms = s.best_orders.size() *
                      edge_symmetry_order(s.best, g.num_legs(), vertex_fields_end(s.best),
                                          g.num_edges());
  out.key = std::move(s.best);
  return out;
}

std::uint64_t automorphism_order(const StableGraph& g) { return canonical_form(g).automorphisms; }

bool isomorphic(const StableGraph& a, const StableGraph& b) {
  if (a.num_legs() != b.num_legs() || a.num_vertices() != b.num_vertices() ||
      a.num_edges() != b.num_edges())
    return false;
  return canonical_form(a).key == canonical_form(b).key;
}

std::vector<Relabeling> automorphisms(const StableGraph& g) {
  Search s = search(g, nullptr, true);
  const int nv = g.num_vertices();
  const int n = g.num_legs();
  const int ne = g.num_edges();
  Built b0 = build(g, nullptr, s.best_orders.front());
  std::vector<int> inv0(g.num_half_edges());
  for (int h = 0; h < g.num_half_edges(); ++h) inv0[b0.he_map[h]] = h;

  // Vertex-fixing symmetries of the canonical graph, as half-edge permutations.
  const Key& key = s.best;
  const int base = vertex_fields_end(key) + 2 * n;
  std::vector<std::vector<int>> groups;
  for (int k = 0; k < ne; ++k) {
    const int* cur = key.data() + base + 4 * k;
    if (k > 0 && std::equal(cur, cur + 4, cur - 4))
      groups.back().push_back(k);
    else
      groups.push_back({k});
  }
  std::vector<std::vector<int>> symmetries;
  std::vector<int> perm(g.num_half_edges());
  for (int h = 0; h < n; ++h) perm[h] = h;
  auto rec = [&](auto&& self, size_t gi) -> void {
    if (gi == groups.size()) {
      symmetries.push_back(perm);
      return;
    }
    std::vector<int> tgt = groups[gi];
    do {
      // flips only for symmetric self-edges
      const int* t0 = key.data() + base + 4 * groups[gi][0];
      bool symmetric = (t0[0] == t0[2] && t0[1] == t0[3]);
      const int m = static_cast<int>(tgt.size());
      const int nflip = symmetric ? (1 << m) : 1;
      for (int mask = 0; mask < nflip; ++mask) {
        for (int i = 0; i < m; ++i) {
          int src = groups[gi][i], dst = tgt[i];
          bool f = (mask >> i) & 1;
          perm[n + 2 * src] = n + 2 * dst + (f ? 1 : 0);
          perm[n + 2 * src + 1] = n + 2 * dst + (f ? 0 : 1);
        }
        self(self, gi + 1);
      }
    } while (std::next_permutation(tgt.begin(), tgt.end()));
  };
  rec(rec, 0);

  std::vector<Relabeling> out;
  for (const auto& order : s.best_orders) {
    Built bi = build(g, nullptr, order);
    std::vector<int> posi(nv);
    for (int i = 0; i < nv; ++i) posi[order[i]] = i;
    for (const auto& sym : symmetries) {
      Relabeling r;
      r.vertex.resize(nv);
      for (int v = 0; v < nv; ++v) r.vertex[v] = s.best_orders.front()[posi[v]];
      r.half_edge.resize(g.num_half_edges());
      for (int h = 0; h < g.num_half_edges(); ++h) r.half_edge[h] = inv0[sym[bi.he_map[h]]];
      out.push_back(std::move(r));
    }
  }
  // identity first
  auto is_id = [](const Relabeling& r) {
    for (size_t i = 0; i < r.half_edge.size(); ++i)
      if (r.half_edge[i] != static_cast<int>(i)) return false;
    for (size_t i = 0; i < r.vertex.size(); ++i)
      if (r.vertex[i] != static_cast<int>(i)) return false;
    return true;
  };
  auto it = std::find_if(out.begin(), out.end(), is_id);
  if (it != out.end()) std::iter_swap(out.begin(), it);
  return out;
}

namespace {

void degenerations(const StableGraph& g, std::vector<StableGraph>& out) {
  const int nv = g.num_vertices();
  const int n = g.num_legs();
  const int ne = g.num_edges();
  std::vector<int> legs(n);
  for (int i = 0; i < n; ++i) legs[i] = g.vertex_of(i);
  std::vector<std::pair<int, int>> edges(ne);
  for (int e = 0; e < ne; ++e) edges[e] = g.edge(e);
  for (int v = 0; v < nv; ++v) {
    if (g.genus(v) >= 1) {
      auto genera = g.genera();
      --genera[v];
      auto ed = edges;
      ed.emplace_back(v, v);
      out.push_back(StableGraph::unchecked(genera, legs, ed));
    }
    std::vector<int> hs = g.half_edges_at(v);
    const int k = static_cast<int>(hs.size());
    for (int mask = 0; mask < (1 << k); ++mask) {
      int in = __builtin_popcount(static_cast<unsigned>(mask));
      for (int g1 = 0; g1 <= g.genus(v); ++g1) {
        int g2 = g.genus(v) - g1;
        if (2 * g1 - 2 + in + 1 <= 0 || 2 * g2 - 2 + (k - in) + 1 <= 0) continue;
        auto genera = g.genera();
        genera[v] = g1;
        genera.push_back(g2);
        std::vector<int> he = g.half_edge_vertices();
        for (int i = 0; i < k; ++i)
          if (!((mask >> i) & 1)) he[hs[i]] = nv;
        std::vector<int> l(he.begin(), he.begin() + n);
        std::vector<std::pair<int, int>> ed;
        for (int e = 0; e < ne; ++e) ed.emplace_back(he[n + 2 * e], he[n + 2 * e + 1]);
        ed.emplace_back(v, nv);
        out.push_back(StableGraph::unchecked(std::move(genera), std::move(l), std::move(ed)));
      }
    }
  }
}

}  // namespace

const std::vector<StableGraph>& enumerate_stable_graphs(int g, int n) {
  if (g < 0 || n < 0 || 2 * g - 2 + n <= 0)
    throw std::invalid_argument("graph_core/enumerate_stable_graphs: unstable (g, n) = (" +
                                std::to_string(g) + ", " + std::to_string(n) + ")");
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::vector<StableGraph>> cache;
  {
    std::lock_guard lock(mu);
    auto it = cache.find({g, n});
    if (it != cache.end()) return it->second;
  }
  std::map<Key, StableGraph> seen;
  std::vector<StableGraph> frontier{StableGraph::trivial(g, n)};
  seen.emplace(canonical_form(frontier[0]).key, canonical_form(frontier[0]).graph);
  while (!frontier.empty()) {
    std::vector<StableGraph> next;
    for (const auto& f : frontier) {
      std::vector<StableGraph> cand;
      degenerations(f, cand);
      for (auto& c : cand) {
        CanonicalForm cf = canonical_form(c);
        if (seen.emplace(cf.key, cf.graph).second) next.push_back(cf.graph);
      }
    }
    frontier = std::move(next);
  }
  std::vector<StableGraph> result;
  result.reserve(seen.size());
  for (auto& [k, gr] : seen) result.push_back(gr);
  std::lock_guard lock(mu);
  auto [it, inserted] = cache.emplace(std::make_pair(g, n), std::move(result));
  return it->second;
}

}  // namespace taut
