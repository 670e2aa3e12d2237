#include "taut/io.hpp"

#include <unistd.h>

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace taut {

Json graph_to_json(const StableGraph& g) {
  Json legs = Json::object();
  for (int i = 0; i < g.num_legs(); ++i) legs[std::to_string(i + 1)] = g.vertex_of(i);
  Json edges = Json::array();
  for (int e = 0; e < g.num_edges(); ++e) {
    auto [a, b] = g.edge(e);
    edges.push_back({{"id", e}, {"vertices", {a, b}}});
  }
  return {{"genera", g.genera()}, {"legs", legs}, {"edges", edges}};
}

StableGraph graph_from_json(const Json& j) {
  try {
    std::vector<int> genera = j.at("genera").get<std::vector<int>>();
    const auto& legs = j.at("legs");
    std::vector<int> leg_vertex(legs.size());
    for (auto it = legs.begin(); it != legs.end(); ++it) {
      int m = std::stoi(it.key());
      if (m < 1 || m > static_cast<int>(leg_vertex.size())) throw std::invalid_argument("marking out of range");
      leg_vertex[m - 1] = it.value().get<int>();
    }
    std::vector<std::pair<int, int>> edges(j.at("edges").size());
    for (const auto& e : j.at("edges")) {
      int id = e.at("id").get<int>();
      if (id < 0 || id >= static_cast<int>(edges.size())) throw std::invalid_argument("edge id out of range");
      edges[id] = {e.at("vertices").at(0).get<int>(), e.at("vertices").at(1).get<int>()};
    }
    return StableGraph(genera, leg_vertex, edges);
  } catch (const Json::exception& e) {
    throw std::invalid_argument(std::string("io/graph_from_json: ") + e.what());
  }
}

Json star_twist_to_json(const StarTwist& t) {
  Json out = Json::object();
  for (size_t e = 0; e < t.size(); ++e) out[std::to_string(e)] = t[e];
  return out;
}

Json class_to_json(const TautClass& x) {
  Json terms = Json::array();
  for (const auto& [_, e] : x.terms()) {
    const DecoratedStratum& s = e.stratum;
    Json kappa = Json::object();
    for (size_t v = 0; v < s.kappa.size(); ++v) {
      if (s.kappa[v].empty()) continue;
      std::map<int, int> mult;
      for (int a : s.kappa[v]) ++mult[a];
      Json k = Json::object();
      for (auto [a, c] : mult) k[std::to_string(a)] = c;
      kappa[std::to_string(v)] = k;
    }
    Json psi = Json::object();
    for (size_t h = 0; h < s.psi.size(); ++h)
      if (s.psi[h] != 0) psi[std::to_string(h)] = s.psi[h];
    terms.push_back({{"graph", graph_to_json(s.graph)}, {"kappa", kappa}, {"psi", psi}, {"coeff", to_string(e.coeff)}});
  }
  return {{"format_version", kFormatVersion}, {"g", x.genus()}, {"n", x.markings()}, {"terms", terms}};
}

TautClass class_from_json(const Json& j) {
  try {
    if (j.at("format_version").get<int>() != kFormatVersion)
      throw std::invalid_argument("io/class_from_json: format version mismatch");
    TautClass out(j.at("g").get<int>(), j.at("n").get<int>());
    for (const auto& t : j.at("terms")) {
      DecoratedStratum s = DecoratedStratum::bare(graph_from_json(t.at("graph")));
      for (auto it = t.at("kappa").begin(); it != t.at("kappa").end(); ++it) {
        int v = std::stoi(it.key());
        if (v < 0 || v >= s.graph.num_vertices()) throw std::invalid_argument("io/class_from_json: bad vertex");
        for (auto k = it.value().begin(); k != it.value().end(); ++k)
          s.kappa[v].insert(s.kappa[v].end(), k.value().get<int>(), std::stoi(k.key()));
        std::sort(s.kappa[v].begin(), s.kappa[v].end());
      }
      for (auto it = t.at("psi").begin(); it != t.at("psi").end(); ++it) {
        int h = std::stoi(it.key());
        if (h < 0 || h >= s.graph.num_half_edges()) throw std::invalid_argument("io/class_from_json: bad half-edge");
        s.psi[h] = it.value().get<int>();
      }
      out.add_term(s, parse_rational(t.at("coeff").get<std::string>()));
    }
    return out;
  } catch (const Json::exception& e) {
    throw std::invalid_argument(std::string("io/class_from_json: ") + e.what());
  }
}

std::string dump(const Json& j) { return j.dump(1) + "\n"; }

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

ClassCache::ClassCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::filesystem::path ClassCache::path_for(const std::string& key) const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(key)));
  return dir_ / (std::string(buf) + ".json");
}

std::optional<TautClass> ClassCache::load(const std::string& key) const {
  std::ifstream in(path_for(key));
  if (!in) return std::nullopt;
  try {
    Json j = Json::parse(in);
    if (j.at("format_version").get<int>() != kFormatVersion || j.at("key").get<std::string>() != key)
      return std::nullopt;
    return class_from_json(j.at("class"));
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

void ClassCache::store(const std::string& key, const TautClass& x) const {
  Json j = {{"format_version", kFormatVersion}, {"key", key}, {"class", class_to_json(x)}};
  auto final_path = path_for(key);
  auto tmp = final_path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("io/ClassCache::store: cannot write " + tmp.string());
    out << dump(j);
    if (!out) throw std::runtime_error("io/ClassCache::store: write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, final_path);
}

}  // namespace taut
