#include "taut/twist.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace taut {

namespace {

// Calls f(parts) for every composition of `total` into `count` parts >= 1.
void for_each_composition(int total, int count, const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> parts(count);
  auto rec = [&](auto&& self, int i, int left) -> void {
    if (i == count - 1) {
      if (left >= 1) {
        parts[i] = left;
        f(parts);
      }
      return;
    }
    for (int x = 1; x <= left - (count - 1 - i); ++x) {
      parts[i] = x;
      self(self, i + 1, left - x);
    }
  };
  if (count == 0) {
    if (total == 0) f(parts);
    return;
  }
  rec(rec, 0, total);
}

bool is_basic_side(const StableGraph& g, int h) {
  return !g.is_leg(h) && !g.is_self_edge(g.edge_of(h));
}

void check_shape(const StableGraph& g, const Twist& I) {
  if (static_cast<int>(I.size()) != g.num_half_edges())
    throw std::invalid_argument("twist_core: twist size does not match the half-edge count");
  for (int h = 0; h < g.num_half_edges(); ++h) {
    if (is_basic_side(g, h) && !I[h])
      throw std::invalid_argument("twist_core: missing value on basic side " + std::to_string(h));
    if (!is_basic_side(g, h) && I[h])
      throw std::invalid_argument(g.is_leg(h) ? "twist_core: value given on a leg"
                                              : "twist_core: value given on a self-edge side");
  }
}

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  void unite(int a, int b) { p[find(a)] = find(b); }
};

std::vector<int> zero_classes(const StableGraph& g, const Twist& I, int* count) {
  UnionFind uf(g.num_vertices());
  for (int e = 0; e < g.num_edges(); ++e) {
    if (g.is_self_edge(e)) continue;
    if (*I[g.half_edge(e, 0)] == 0) uf.unite(g.edge(e).first, g.edge(e).second);
  }
  std::vector<int> cls(g.num_vertices(), -1);
  std::map<int, int> id;
  for (int v = 0; v < g.num_vertices(); ++v) {
    auto [it, _] = id.emplace(uf.find(v), static_cast<int>(id.size()));
    cls[v] = it->second;
  }
  *count = static_cast<int>(id.size());
  return cls;
}

// Returns a directed cycle of classes, or empty if acyclic.
std::vector<int> find_cycle(int n, const std::vector<std::pair<int, int>>& arcs) {
  std::vector<std::vector<int>> out(n);
  for (auto [a, b] : arcs) out[a].push_back(b);
  std::vector<int> state(n, 0), stack;
  std::vector<int> cycle;
  auto dfs = [&](auto&& self, int v) -> bool {
    state[v] = 1;
    stack.push_back(v);
    for (int w : out[v]) {
      if (state[w] == 1) {
        auto it = std::find(stack.begin(), stack.end(), w);
        cycle.assign(it, stack.end());
        return true;
      }
      if (state[w] == 0 && self(self, w)) return true;
    }
    stack.pop_back();
    state[v] = 2;
    return false;
  };
  for (int v = 0; v < n; ++v)
    if (state[v] == 0 && dfs(dfs, v)) break;
  return cycle;
}

}  // namespace

Twist empty_twist(const StableGraph& g) { return Twist(g.num_half_edges()); }

Twist twist_from_edges(const StableGraph& g, const std::vector<int>& side0_values) {
  Twist I = empty_twist(g);
  size_t k = 0;
  for (int e = 0; e < g.num_edges(); ++e) {
    if (g.is_self_edge(e)) continue;
    if (k >= side0_values.size()) throw std::invalid_argument("twist_core: too few edge values");
    I[g.half_edge(e, 0)] = side0_values[k];
    I[g.half_edge(e, 1)] = -side0_values[k];
    ++k;
  }
  if (k != side0_values.size()) throw std::invalid_argument("twist_core: too many edge values");
  return I;
}

TwistVerdict validate_twist(const StableGraph& g, const Twist& I) {
  check_shape(g, I);
  for (int e = 0; e < g.num_edges(); ++e) {
    if (g.is_self_edge(e)) continue;
    int h0 = g.half_edge(e, 0), h1 = g.half_edge(e, 1);
    if (*I[h0] + *I[h1] != 0) return {false, "balancing", {h0, h1}};
  }
  int nc = 0;
  std::vector<int> cls = zero_classes(g, I, &nc);
  std::map<std::pair<int, int>, int> arc_witness;  // (from, to) -> positive side
  for (int e = 0; e < g.num_edges(); ++e) {
    if (g.is_self_edge(e)) continue;
    int h0 = g.half_edge(e, 0), h1 = g.half_edge(e, 1);
    int c0 = cls[g.vertex_of(h0)], c1 = cls[g.vertex_of(h1)];
    if (*I[h0] != 0 && c0 == c1) return {false, "vanishing", {h0, h1}};
  }
  for (int e = 0; e < g.num_edges(); ++e) {
    if (g.is_self_edge(e)) continue;
    int h0 = g.half_edge(e, 0), h1 = g.half_edge(e, 1);
    if (*I[h0] == 0) continue;
    int pos = *I[h0] > 0 ? h0 : h1;
    int from = cls[g.vertex_of(pos)], to = cls[g.vertex_of(g.partner(pos))];
    auto rev = arc_witness.find({to, from});
    if (rev != arc_witness.end()) return {false, "sign", {rev->second, pos}};
    arc_witness.emplace(std::make_pair(from, to), pos);
  }
  std::vector<std::pair<int, int>> arcs;
  for (auto& [a, _] : arc_witness) arcs.push_back(a);
  std::vector<int> cyc = find_cycle(nc, arcs);
  if (!cyc.empty()) {
    std::vector<int> reps;
    for (int c : cyc)
      for (int v = 0; v < g.num_vertices(); ++v)
        if (cls[v] == c) {
          reps.push_back(v);
          break;
        }
    return {false, "transitivity", reps};
  }
  return {};
}

ComponentDigraph component_digraph(const StableGraph& g, const Twist& I) {
  check_shape(g, I);
  ComponentDigraph d;
  d.vertex_class = zero_classes(g, I, &d.num_classes);
  std::set<std::pair<int, int>> arcs;
  for (int e = 0; e < g.num_edges(); ++e) {
    if (g.is_self_edge(e)) continue;
    int h0 = g.half_edge(e, 0), h1 = g.half_edge(e, 1);
    if (*I[h0] + *I[h1] != 0)
      throw std::domain_error("twist_core/component_digraph: unbalanced edge " + std::to_string(e));
    if (*I[h0] == 0) continue;
    int c0 = d.vertex_class[g.vertex_of(h0)], c1 = d.vertex_class[g.vertex_of(h1)];
    if (c0 == c1)
      throw std::domain_error("twist_core/component_digraph: vanishing violated at edge " +
                              std::to_string(e));
    arcs.insert(*I[h0] > 0 ? std::make_pair(c0, c1) : std::make_pair(c1, c0));
  }
  d.arcs.assign(arcs.begin(), arcs.end());
  return d;
}

std::vector<Twist> enumerate_twists_general(const StableGraph& g, const std::vector<int>& mu, int k) {
  if (static_cast<int>(mu.size()) != g.num_legs())
    throw std::invalid_argument("twist_core/enumerate_twists_general: mu length differs from leg count");
  if (k < 0) throw std::invalid_argument("twist_core/enumerate_twists_general: k must be nonnegative");
  const int nv = g.num_vertices();
  // demand0[v]: sum of m_i at v minus every term not involving twist values
  std::vector<int> demand0(nv, 0);
  for (int v = 0; v < nv; ++v) demand0[v] = -k * (2 * g.genus(v) - 2);
  for (int i = 0; i < g.num_legs(); ++i) demand0[g.vertex_of(i)] += mu[i];
  for (int h = g.num_legs(); h < g.num_half_edges(); ++h) demand0[g.vertex_of(h)] -= k;
  std::vector<std::vector<int>> sides(nv);  // basic sides per vertex
  for (int h = g.num_legs(); h < g.num_half_edges(); ++h)
    if (is_basic_side(g, h)) sides[g.vertex_of(h)].push_back(h);

  std::set<Twist> found;
  Twist cur = empty_twist(g);
  const unsigned full = (1u << nv) - 1;

  auto connected = [&](unsigned c) {
    int first = __builtin_ctz(c);
    unsigned seen = 1u << first, frontier = seen;
    while (frontier) {
      unsigned next = 0;
      for (int v = 0; v < nv; ++v) {
        if (!((frontier >> v) & 1)) continue;
        for (int h : sides[v]) {
          int w = g.vertex_of(g.partner(h));
          if (((c >> w) & 1) && !((seen >> w) & 1)) next |= 1u << w;
        }
      }
      seen |= next;
      frontier = next;
    }
    return seen == c;
  };

  auto peel = [&](auto&& self, unsigned remaining) -> void {
    if (remaining == 0) {
      found.insert(cur);
      return;
    }
    for (unsigned c = remaining; c; c = (c - 1) & remaining) {
      if (!connected(c)) continue;
      std::vector<int> members;
      for (int v = 0; v < nv; ++v)
        if ((c >> v) & 1) members.push_back(v);
      // per member: outgoing sides and their demand
      std::vector<std::vector<int>> out(members.size());
      std::vector<int> demand(members.size());
      bool ok = true;
      for (size_t j = 0; j < members.size() && ok; ++j) {
        int v = members[j];
        int d = demand0[v];
        for (int h : sides[v]) {
          int w = g.vertex_of(g.partner(h));
          if ((c >> w) & 1) continue;  // internal: zero
          if ((remaining >> w) & 1)
            out[j].push_back(h);
          else
            d -= *cur[h];
        }
        demand[j] = d;
        if (static_cast<int>(out[j].size()) > d || (out[j].empty() && d != 0)) ok = false;
      }
      if (!ok) continue;
      std::vector<int> internal;
      for (int v : members)
        for (int h : sides[v])
          if ((c >> g.vertex_of(g.partner(h))) & 1) internal.push_back(h);
      for (int h : internal) cur[h] = 0;
      auto assign = [&](auto&& self2, size_t j) -> void {
        if (j == members.size()) {
          self(self, remaining & ~c);
          return;
        }
        for_each_composition(demand[j], static_cast<int>(out[j].size()), [&](const std::vector<int>& p) {
          for (size_t t = 0; t < p.size(); ++t) {
            cur[out[j][t]] = p[t];
            cur[g.partner(out[j][t])] = -p[t];
          }
          self2(self2, j + 1);
        });
        for (int h : out[j]) {
          cur[h].reset();
          cur[g.partner(h)].reset();
        }
      };
      assign(assign, 0);
      for (int h : internal) cur[h].reset();
    }
  };
  peel(peel, full);
  return {found.begin(), found.end()};
}

bool is_star(const StableGraph& g, int center) {
  for (int e = 0; e < g.num_edges(); ++e) {
    auto [a, b] = g.edge(e);
    if (a == b) return false;
    if (a != center && b != center) return false;
  }
  return true;
}

std::vector<StarTwist> enumerate_star_twists(const StarGraph& s, const std::vector<int>& mu) {
  const StableGraph& g = s.graph;
  if (static_cast<int>(mu.size()) != g.num_legs())
    throw std::invalid_argument("twist_core/enumerate_star_twists: mu length differs from leg count");
  const int nv = g.num_vertices();
  std::vector<int> msum(nv, 0);
  for (int i = 0; i < g.num_legs(); ++i) msum[g.vertex_of(i)] += mu[i];
  std::vector<std::vector<int>> edges_at(nv);
  for (int e = 0; e < g.num_edges(); ++e) {
    auto [a, b] = g.edge(e);
    edges_at[a == s.center ? b : a].push_back(e);
  }
  std::vector<StarTwist> out;
  StarTwist cur(g.num_edges(), 0);
  auto rec = [&](auto&& self, int v) -> void {
    if (v == nv) {
      int lhs = 2 * g.genus(s.center) - 2;
      for (int x : cur) lhs += x + 1;
      if (lhs == msum[s.center]) out.push_back(cur);
      return;
    }
    if (v == s.center) return self(self, v + 1);
    const auto& es = edges_at[v];
    int target = 2 * g.genus(v) - 2 + static_cast<int>(es.size()) - msum[v];
    for_each_composition(target, static_cast<int>(es.size()), [&](const std::vector<int>& p) {
      for (size_t t = 0; t < p.size(); ++t) cur[es[t]] = p[t];
      self(self, v + 1);
    });
  };
  rec(rec, 0);
  std::sort(out.begin(), out.end());
  return out;
}

Twist star_twist_to_general(const StarGraph& s, const StarTwist& t) {
  const StableGraph& g = s.graph;
  Twist I = empty_twist(g);
  for (int e = 0; e < g.num_edges(); ++e) {
    int h0 = g.half_edge(e, 0), h1 = g.half_edge(e, 1);
    if (g.vertex_of(h1) == s.center) std::swap(h0, h1);
    I[h0] = t[e];
    I[h1] = -t[e];
  }
  return I;
}

std::vector<StarGraph> enumerate_simple_star_graphs(int g, const std::vector<int>& mu, StarFilter filter,
                                                    bool include_trivial) {
  const int n = static_cast<int>(mu.size());
  if (std::accumulate(mu.begin(), mu.end(), 0) != 2 * g - 2)
    throw std::invalid_argument("graph_core/enumerate_simple_star_graphs: sum of mu must be 2g-2");
  bool meromorphic = std::any_of(mu.begin(), mu.end(), [](int m) { return m < 0; });
  if (include_trivial && !meromorphic)
    throw std::invalid_argument(
        "graph_core/enumerate_simple_star_graphs: the trivial star graph is only admitted for strictly "
        "meromorphic mu");
  std::map<std::vector<int>, StarGraph> seen;
  for (const auto& G : enumerate_stable_graphs(g, n)) {
    if (G.num_edges() == 0 && !include_trivial) continue;
    for (int c = 0; c < G.num_vertices(); ++c) {
      if (!is_star(G, c)) continue;
      bool neg_ok = true;
      for (int i = 0; i < n; ++i)
        if (mu[i] < 0 && G.vertex_of(i) != c) neg_ok = false;
      if (!neg_ok) continue;
      Coloring col;
      col.vertex.assign(G.num_vertices(), {0});
      col.vertex[c] = {1};
      CanonicalForm cf = canonical_form(G, &col);
      if (seen.count(cf.key)) continue;
      StarGraph s{cf.graph, cf.map.vertex[c]};
      if (filter == StarFilter::contributing && enumerate_star_twists(s, mu).empty()) continue;
      seen.emplace(cf.key, std::move(s));
    }
  }
  std::vector<StarGraph> out;
  for (auto& [_, s] : seen) out.push_back(std::move(s));
  return out;
}

}  // namespace taut
