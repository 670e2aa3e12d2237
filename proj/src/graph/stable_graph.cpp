#include "taut/stable_graph.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace taut {

namespace {

std::vector<int> build_half_edges(const std::vector<int>& legs,
                                  const std::vector<std::pair<int, int>>& edges) {
  std::vector<int> he(legs);
  he.reserve(legs.size() + 2 * edges.size());
  for (const auto& [a, b] : edges) {
    he.push_back(a);
    he.push_back(b);
  }
  return he;
}

}  // namespace

StableGraph::StableGraph(std::vector<int> genera, std::vector<int> leg_vertices,
                         std::vector<std::pair<int, int>> edges)
    : genera_(std::move(genera)),
      he_vertex_(build_half_edges(leg_vertices, edges)),
      n_(static_cast<int>(leg_vertices.size())) {
  validate();
}

StableGraph StableGraph::unchecked(std::vector<int> genera, std::vector<int> leg_vertices,
                                   std::vector<std::pair<int, int>> edges) {
  StableGraph g;
  g.genera_ = std::move(genera);
  g.he_vertex_ = build_half_edges(leg_vertices, edges);
  g.n_ = static_cast<int>(leg_vertices.size());
  return g;
}

StableGraph StableGraph::trivial(int g, int n) {
  if (g < 0 || n < 0 || 2 * g - 2 + n <= 0)
    throw std::invalid_argument("unstable pair (g, n) = (" + std::to_string(g) + ", " +
                                std::to_string(n) + ")");
  return StableGraph({g}, std::vector<int>(n, 0), {});
}

int StableGraph::total_genus() const {
  return std::accumulate(genera_.begin(), genera_.end(), 0) + h1();
}

int StableGraph::partner(int h) const {
  if (h < n_) return h;
  return ((h - n_) % 2 == 0) ? h + 1 : h - 1;
}

int StableGraph::valence(int v) const {
  int c = 0;
  for (int x : he_vertex_) c += (x == v);
  return c;
}

std::vector<int> StableGraph::half_edges_at(int v) const {
  std::vector<int> out;
  for (int h = 0; h < num_half_edges(); ++h)
    if (he_vertex_[h] == v) out.push_back(h);
  return out;
}

bool StableGraph::is_connected() const {
  const int nv = num_vertices();
  if (nv == 0) return false;
  std::vector<int> parent(nv);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int e = 0; e < num_edges(); ++e) {
    auto [a, b] = edge(e);
    parent[find(a)] = find(b);
  }
  const int root = find(0);
  for (int v = 1; v < nv; ++v)
    if (find(v) != root) return false;
  return true;
}

void StableGraph::validate() const {
  const int nv = num_vertices();
  if (nv == 0) throw std::invalid_argument("stable graph: no vertices");
  for (int x : he_vertex_)
    if (x < 0 || x >= nv) throw std::invalid_argument("stable graph: half-edge on unknown vertex");
  for (int v = 0; v < nv; ++v) {
    if (genera_[v] < 0) throw std::invalid_argument("stable graph: negative vertex genus");
    if (2 * genera_[v] - 2 + valence(v) <= 0)
      throw std::invalid_argument("stable graph: vertex " + std::to_string(v) + " is unstable");
  }
  if (!is_connected()) throw std::invalid_argument("stable graph: not connected");
}

StableGraph contract_edges(const StableGraph& g, const std::vector<bool>& contract,
                           std::vector<int>* vertex_map) {
  const int nv = g.num_vertices();
  std::vector<int> parent(nv);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int e = 0; e < g.num_edges(); ++e) {
    if (!contract[e]) continue;
    auto [a, b] = g.edge(e);
    parent[find(a)] = find(b);
  }
  std::vector<int> comp(nv, -1);
  int count = 0;
  for (int v = 0; v < nv; ++v) {
    int r = find(v);
    if (comp[r] < 0) comp[r] = count++;
    comp[v] = comp[r];
  }
  std::vector<int> genera(count, 0), sizes(count, 0), internal(count, 0);
  for (int v = 0; v < nv; ++v) {
    genera[comp[v]] += g.genus(v);
    ++sizes[comp[v]];
  }
  std::vector<std::pair<int, int>> edges;
  for (int e = 0; e < g.num_edges(); ++e) {
    auto [a, b] = g.edge(e);
    if (contract[e])
      ++internal[comp[a]];
    else
      edges.emplace_back(comp[a], comp[b]);
  }
  for (int c = 0; c < count; ++c) genera[c] += internal[c] - sizes[c] + 1;
  std::vector<int> legs(g.num_legs());
  for (int i = 0; i < g.num_legs(); ++i) legs[i] = comp[g.vertex_of(i)];
  if (vertex_map) *vertex_map = comp;
  return StableGraph::unchecked(std::move(genera), std::move(legs), std::move(edges));
}

}  // namespace taut
