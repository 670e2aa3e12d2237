// Command-line driver for the tautological-class library.
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "taut/hclass.hpp"
#include "taut/io.hpp"

using namespace taut;

namespace {

enum Exit { kOk = 0, kInternal = 1, kParse = 2, kInfeasible = 3, kInterpolation = 4, kDistinct = 5 };

struct ParseFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Opts {
  int g = -1;
  std::string mu;
  int degree = -1;
  int k = 1;
  std::string format = "text";
  std::string cache_dir;
  int jobs = 1;
  int max_samples = 64;
  bool contributing = false;
};

std::vector<int> parse_mu(const std::string& s) {
  std::vector<int> out;
  if (s.empty()) return out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) {
    size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(part, &used);
    } catch (const std::exception&) {
      throw ParseFailure("cli/parse: --mu entry '" + part + "' is not an integer");
    }
    if (used != part.size()) throw ParseFailure("cli/parse: --mu entry '" + part + "' is not an integer");
    out.push_back(v);
  }
  return out;
}

std::string mu_text(const std::vector<int>& mu) {
  std::string s;
  for (size_t i = 0; i < mu.size(); ++i) s += (i ? "," : "") + std::to_string(mu[i]);
  return s;
}

std::string graph_text(const StableGraph& G) {
  std::ostringstream os;
  os << "genera [";
  for (int v = 0; v < G.num_vertices(); ++v) os << (v ? " " : "") << G.genus(v);
  os << "] legs [";
  for (int i = 0; i < G.num_legs(); ++i) os << (i ? " " : "") << i + 1 << "->" << G.vertex_of(i);
  os << "] edges [";
  for (int e = 0; e < G.num_edges(); ++e) os << (e ? " " : "") << G.edge(e).first << "-" << G.edge(e).second;
  os << "]";
  return os.str();
}

std::string class_text(const TautClass& x) {
  std::ostringstream os;
  if (x.is_zero()) return "  0\n";
  for (const auto& [_, e] : x.terms()) {
    const auto& s = e.stratum;
    os << "  " << to_string(e.coeff) << "  " << graph_text(s.graph);
    for (int v = 0; v < s.graph.num_vertices(); ++v)
      for (int a : s.kappa[v]) os << " k" << a << "@" << v;
    for (int h = 0; h < s.graph.num_half_edges(); ++h)
      if (s.psi[h]) os << " psi" << (s.psi[h] > 1 ? "^" + std::to_string(s.psi[h]) : "") << "@h" << h;
    os << "\n";
  }
  return os.str();
}

Json rationals(const std::vector<Rational>& v) {
  Json out = Json::array();
  for (const auto& q : v) out.push_back(to_string(q));
  return out;
}

void require_g(const Opts& o) {
  if (o.g < 0) throw ParseFailure("cli/parse: --g is required and must be nonnegative");
}

void require_canonical_sum(int g, const std::vector<int>& mu, int k, const std::string& op) {
  long sum = 0;
  for (int m : mu) sum += m;
  if (sum != static_cast<long>(k) * (2 * g - 2))
    throw std::invalid_argument("cli/" + op + ": parts of mu sum to " + std::to_string(sum) + ", expected k(2g-2) = " +
                                std::to_string(k * (2 * g - 2)));
  if (2 * g - 2 + static_cast<int>(mu.size()) <= 0)
    throw std::invalid_argument("cli/" + op + ": (g, n) is unstable");
}

struct Output {
  Json result = Json::object();
  std::string text;
  int code = kOk;
};

Output cmd_graphs(const Opts& o, const std::vector<int>& mu) {
  require_g(o);
  const int n = static_cast<int>(mu.size());
  if (2 * o.g - 2 + n <= 0) throw std::invalid_argument("cli/graphs: (g, n) is unstable");
  Output out;
  const auto& gs = enumerate_stable_graphs(o.g, n);
  Json list = Json::array();
  std::ostringstream os;
  os << gs.size() << " stable graphs for g=" << o.g << " n=" << n << "\n";
  for (const auto& G : gs) {
    Json j = graph_to_json(G);
    j["automorphisms"] = automorphism_order(G);
    list.push_back(j);
    os << "  " << graph_text(G) << "  |Aut|=" << automorphism_order(G) << "\n";
  }
  out.result = {{"count", gs.size()}, {"graphs", list}};
  out.text = os.str();
  return out;
}

Output cmd_stars(const Opts& o, const std::vector<int>& mu) {
  require_g(o);
  require_canonical_sum(o.g, mu, 1, "stars");
  bool mero = std::any_of(mu.begin(), mu.end(), [](int m) { return m < 0; });
  auto stars =
      enumerate_simple_star_graphs(o.g, mu, o.contributing ? StarFilter::contributing : StarFilter::all, mero);
  Output out;
  Json list = Json::array();
  std::ostringstream os;
  os << stars.size() << (o.contributing ? " contributing" : "") << " simple star graphs for g=" << o.g
     << " mu=(" << mu_text(mu) << ")\n";
  for (const auto& s : stars) {
    Json tw = Json::array();
    auto ts = enumerate_star_twists(s, mu);
    for (const auto& t : ts) tw.push_back(star_twist_to_json(t));
    Json j = {{"graph", graph_to_json(s.graph)},
              {"center", s.center},
              {"automorphisms", automorphism_order(s.graph)},
              {"twists", tw}};
    list.push_back(j);
    os << "  " << graph_text(s.graph) << " center " << s.center << " |Aut|=" << automorphism_order(s.graph)
       << " twists:";
    if (ts.empty()) os << " none";
    for (const auto& t : ts) os << " (" << mu_text(t) << ")";
    os << "\n";
  }
  out.result = {{"count", stars.size()}, {"stars", list}};
  out.text = os.str();
  return out;
}

Output cmd_twists(const Opts& o, const std::vector<int>& mu) {
  require_g(o);
  if (o.k < 1) throw ParseFailure("cli/parse: --k must be positive");
  require_canonical_sum(o.g, mu, o.k, "twists");
  Output out;
  Json list = Json::array();
  std::ostringstream os;
  int count = 0;
  for (const auto& G : enumerate_stable_graphs(o.g, static_cast<int>(mu.size()))) {
    auto ts = enumerate_twists_general(G, mu, o.k);
    if (ts.empty()) continue;
    ++count;
    Json tw = Json::array();
    os << "  " << graph_text(G) << "\n";
    for (const auto& t : ts) {
      Json m = Json::object();
      os << "    ";
      for (int e = 0; e < G.num_edges(); ++e) {
        if (G.is_self_edge(e)) continue;
        auto [a, b] = G.edge(e);
        int h = a <= b ? G.half_edge(e, 0) : G.half_edge(e, 1);
        m[std::to_string(e)] = *t[h];
        os << "e" << e << "=" << *t[h] << " ";
      }
      if (m.empty()) os << "(no edge to twist)";
      os << "\n";
      tw.push_back(m);
    }
    list.push_back({{"graph", graph_to_json(G)}, {"twists", tw}});
  }
  out.result = {{"count", count}, {"graphs", list}};
  out.text = std::to_string(count) + " graphs with twists for g=" + std::to_string(o.g) + " mu=(" + mu_text(mu) +
             ") k=" + std::to_string(o.k) + "\n" + os.str();
  return out;
}

Output cmd_pixton(const Opts& o, const std::vector<int>& mu) {
  require_g(o);
  require_canonical_sum(o.g, mu, 1, "pixton");
  if (o.degree < 0) throw ParseFailure("cli/parse: pixton needs --degree");
  PixtonOptions po;
  po.jobs = o.jobs;
  po.max_samples = o.max_samples;
  auto res = pixton_class_detailed(o.g, mu, o.degree, po);
  auto zero = equals_pairing(res.cls, TautClass(o.g, static_cast<int>(mu.size())), o.degree, o.jobs);
  Output out;
  out.result = {{"class", class_to_json(res.cls)},
                {"fit_r", res.fit_r},
                {"holdout_r", res.holdout_r},
                {"zero_under_pairing", zero.equal},
                {"generators_checked", zero.generators_checked}};
  if (o.format == "json") {
    Json raw = Json::array();
    std::vector<int> all(res.fit_r);
    all.insert(all.end(), res.holdout_r.begin(), res.holdout_r.end());
    for (int r : all) raw.push_back({{"r", r}, {"class", class_to_json(pixton_fixed_r(o.g, mu, o.degree, r))}});
    out.result["raw"] = raw;
  }
  std::ostringstream os;
  os << "P^" << o.degree << " for g=" << o.g << " mu=(" << mu_text(mu) << "): " << res.cls.size() << " terms\n"
     << class_text(res.cls) << "fit r: " << mu_text(res.fit_r) << "  held out: " << mu_text(res.holdout_r) << "\n"
     << (zero.equal ? "zero class under pairing" : "nonzero under pairing") << " (" << zero.generators_checked
     << " complementary generators)\n";
  out.text = os.str();
  return out;
}

Output cmd_hclass(const Opts& o, const std::vector<int>& mu) {
  require_g(o);
  require_canonical_sum(o.g, mu, 1, "hclass");
  auto x = h_weighted(o.g, mu);
  Output out;
  out.result = {{"class", class_to_json(x)}};
  out.text = "H for g=" + std::to_string(o.g) + " mu=(" + mu_text(mu) + "): " + std::to_string(x.size()) +
             " terms\n" + class_text(x);
  return out;
}

Output cmd_closure(const Opts& o, const std::vector<int>& mu, const std::optional<ClassCache>& cache) {
  require_g(o);
  require_canonical_sum(o.g, mu, 1, "closure");
  auto x = closure_class(o.g, mu);
  Output out;
  out.result = {{"class", class_to_json(x)}};
  std::ostringstream os;
  os << "closure for g=" << o.g << " mu=(" << mu_text(mu) << "): " << x.size() << " terms\n" << class_text(x);
  int neg = 0, simple = 0;
  for (int m : mu) {
    neg += m < 0;
    simple += m == -1;
  }
  if (o.g >= 1 && neg == 1 && simple == 1) {
    // the residue rule gave zero; check that the meromorphic formula agrees
    auto f = closure_from_meromorphic_formula(o.g, mu);
    auto v = equals_pairing(f, TautClass(o.g, static_cast<int>(mu.size())), o.g, o.jobs);
    if (cache) cache->store("formula " + closure_key(o.g, mu).substr(8), f);
    out.result["formula_class"] = class_to_json(f);
    out.result["formula_zero_under_pairing"] = v.equal;
    out.result["generators_checked"] = v.generators_checked;
    os << "meromorphic formula: " << f.size() << " terms, " << (v.equal ? "zero" : "NONZERO")
       << " under pairing against " << v.generators_checked << " generators\n";
    if (!v.equal) out.code = kDistinct;
  }
  out.text = os.str();
  return out;
}

Output cmd_verify(const Opts& o, const std::vector<int>& mu) {
  require_g(o);
  require_canonical_sum(o.g, mu, 1, "verify");
  auto r = verify_conjecture_A(o.g, mu, o.jobs);
  Output out;
  Json terms = Json::array();
  std::ostringstream os;
  os << r.verdict_name() << " for g=" << o.g << " mu=(" << mu_text(mu) << ")"
     << (r.conjecture_free ? " [star side conjecture-free]" : " [star side uses the recursion]") << "\n"
     << r.verdict.generators_checked << " complementary generators checked\n";
  for (const auto& t : r.terms) {
    Json vm = Json::array();
    for (const auto& m : t.vertex_mu) vm.push_back(m);
    Json j = {{"graph", graph_to_json(t.star.graph)},
              {"center", t.star.center},
              {"automorphisms", automorphism_order(t.star.graph)},
              {"twist", star_twist_to_json(t.twist)},
              {"weight", to_string(t.weight)},
              {"vertex_mu", vm},
              {"dropped", t.dropped}};
    if (t.dropped) j["reason"] = t.reason;
    terms.push_back(j);
    os << "  " << graph_text(t.star.graph) << " twist (" << mu_text(t.twist) << ") weight " << to_string(t.weight)
       << " |Aut|=" << automorphism_order(t.star.graph) << (t.dropped ? " dropped: " + t.reason : "") << "\n";
  }
  out.result = {{"verdict", r.verdict_name()},
                {"semantics", r.verdict.semantics},
                {"conjecture_free", r.conjecture_free},
                {"generators_checked", r.verdict.generators_checked},
                {"terms", terms},
                {"star_pairings", rationals(r.star_pairings)},
                {"pixton_pairings", rationals(r.pixton_pairings)},
                {"star_class", class_to_json(r.star_side)},
                {"pixton_class", class_to_json(r.pixton_side)}};
  if (r.verdict.witness) {
    out.result["witness"] = {{"graph", graph_to_json(r.verdict.witness->stratum.graph)},
                             {"star", to_string(r.verdict.witness_x)},
                             {"pixton", to_string(r.verdict.witness_y)}};
  }
  out.text = os.str();
  if (!r.equal) out.code = kDistinct;
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tautological classes of twisted canonical divisors"};
  app.require_subcommand(1);
  Opts o;
  if (const char* env = std::getenv("TAUT_CACHE_DIR")) o.cache_dir = env;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"graphs", "list stable graphs of genus g with as many legs as --mu has parts"},
      {"stars", "list simple star graphs and their twists"},
      {"twists", "list stable graphs carrying twists"},
      {"pixton", "compute Pixton's class of degree --degree"},
      {"hclass", "compute the weighted fundamental class H"},
      {"closure", "compute the closure class by the recursion"},
      {"verify", "compare the star sum with Pixton's class under the pairing"}};
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--g", o.g, "genus");
    sub->add_option("--mu", o.mu, "comma-separated parts, e.g. 3,-1");
    sub->add_option("--degree", o.degree, "class degree (pixton)");
    sub->add_option("--k", o.k, "twist level (twists)");
    sub->add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--cache-dir", o.cache_dir, "persistent class cache (default: $TAUT_CACHE_DIR)");
    sub->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--max-samples", o.max_samples, "interpolation sample cap")->check(CLI::PositiveNumber);
    sub->add_flag("--contributing", o.contributing, "only star graphs with twists (stars)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kParse;
  }
  const std::string cmd = app.get_subcommands().front()->get_name();
  auto t0 = std::chrono::steady_clock::now();
  try {
    std::vector<int> mu = parse_mu(o.mu);
    std::optional<ClassCache> cache;
    if (!o.cache_dir.empty()) {
      cache.emplace(o.cache_dir);
      const ClassCache* c = &*cache;
      set_closure_store({[c](const std::string& key) { return c->load(key); },
                         [c](const std::string& key, const TautClass& x) { c->store(key, x); }});
    }
    Output out;
    if (cmd == "graphs") out = cmd_graphs(o, mu);
    else if (cmd == "stars") out = cmd_stars(o, mu);
    else if (cmd == "twists") out = cmd_twists(o, mu);
    else if (cmd == "pixton") out = cmd_pixton(o, mu);
    else if (cmd == "hclass") out = cmd_hclass(o, mu);
    else if (cmd == "closure") out = cmd_closure(o, mu, cache);
    else out = cmd_verify(o, mu);
    if (o.format == "json") {
      Json env = {{"format_version", kFormatVersion},
                  {"command", cmd},
                  {"inputs", {{"g", o.g}, {"mu", mu}, {"degree", o.degree}, {"k", o.k}}},
                  {"result", out.result}};
      std::cout << dump(env);
    } else {
      std::cout << out.text;
    }
    std::cerr << "time: " << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() << " s\n";
    return out.code;
  } catch (const ParseFailure& e) {
    std::cerr << e.what() << "\n";
    return kParse;
  } catch (const InterpolationError& e) {
    std::cerr << e.what() << " (r used: " << mu_text(e.samples()) << ")\n";
    return kInterpolation;
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return kInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}
