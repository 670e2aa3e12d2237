#include "taut/hclass.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <stdexcept>

namespace taut {

namespace {

bool meromorphic(const std::vector<int>& mu) {
  return std::any_of(mu.begin(), mu.end(), [](int m) { return m < 0; });
}

void check_mu(int g, const std::vector<int>& mu, const char* op) {
  if (g < 0) throw std::invalid_argument(std::string("hclass/") + op + ": negative genus");
  if (std::accumulate(mu.begin(), mu.end(), 0) != 2 * g - 2)
    throw std::invalid_argument(std::string("hclass/") + op + ": parts of mu must sum to 2g-2");
  if (2 * g - 2 + static_cast<int>(mu.size()) <= 0)
    throw std::invalid_argument(std::string("hclass/") + op + ": unstable (g, n)");
}

// Exactly one negative part, equal to -1: no such differential exists.
bool single_simple_pole(const std::vector<int>& mu) {
  int neg = 0, simple = 0;
  for (int m : mu) {
    if (m < 0) ++neg;
    if (m == -1) ++simple;
  }
  return neg == 1 && simple == 1;
}

// Order in which classes are memoized: ascending parts.
std::vector<int> sorting_permutation(const std::vector<int>& mu) {
  std::vector<int> p(mu.size());
  std::iota(p.begin(), p.end(), 0);
  std::stable_sort(p.begin(), p.end(), [&](int a, int b) { return mu[a] < mu[b]; });
  return p;
}

// Class computed for mu in the order of `p` (sorted[j] = mu[p[j]]), moved to
// the order of mu: marking j+1 becomes marking p[j]+1.
TautClass unsort(const TautClass& x, const std::vector<int>& p) {
  std::vector<int> sigma(p.size());
  for (size_t j = 0; j < p.size(); ++j) sigma[j] = p[j] + 1;
  return relabel(x, sigma);
}

TautClass closure_sorted(int g, const std::vector<int>& mu);

TautClass closure_any(int g, const std::vector<int>& mu) {
  auto p = sorting_permutation(mu);
  std::vector<int> sorted(mu.size());
  for (size_t j = 0; j < p.size(); ++j) sorted[j] = mu[p[j]];
  return unsort(closure_sorted(g, sorted), p);
}

// Slot vector of vertex v: its legs, then its edge sides.
std::vector<int> slot_mu(const StarGraph& s, const StarTwist& I, const std::vector<int>& mu, int v) {
  const StableGraph& G = s.graph;
  std::vector<int> out;
  for (int h : G.half_edges_at(v)) {
    if (G.is_leg(h))
      out.push_back(mu[h]);
    else
      out.push_back(v == s.center ? -I[G.edge_of(h)] - 1 : I[G.edge_of(h)] - 1);
  }
  return out;
}

// Γ_n of the largest-part identity: genus-0 center carrying exactly the
// last two markings, one edge to a genus-g vertex.
bool is_extremal_graph(const StarGraph& s, int n_plus) {
  const StableGraph& G = s.graph;
  if (G.num_vertices() != 2 || G.num_edges() != 1 || G.genus(s.center) != 0) return false;
  std::vector<int> at_center;
  for (int i = 0; i < G.num_legs(); ++i)
    if (G.vertex_of(i) == s.center) at_center.push_back(i);
  return at_center == std::vector<int>{n_plus - 2, n_plus - 1};
}

std::mutex memo_lock;
std::map<std::pair<int, std::vector<int>>, TautClass> memo;
std::set<std::pair<int, std::vector<int>>> in_progress;
ClosureStore store;

TautClass compute_sorted(int g, const std::vector<int>& mu) {
  const int n = static_cast<int>(mu.size());
  if (g == 0) {
    // no holomorphic differentials in genus 0; meromorphic ones fill the space
    return meromorphic(mu) ? TautClass::unit(0, n) : TautClass(0, n);
  }
  if (meromorphic(mu)) {
    if (single_simple_pole(mu)) return TautClass(g, n);
    return closure_from_meromorphic_formula(g, mu);
  }
  // holomorphic
  std::vector<int> nz;
  std::vector<int> pos_nz, pos_z;
  for (int i = 0; i < n; ++i) (mu[i] == 0 ? pos_z : pos_nz).push_back(i);
  if (pos_nz.empty()) {
    if (g == 1) return TautClass::unit(1, n);
    throw std::logic_error("hclass/closure_class: all-zero holomorphic vector outside genus 1");
  }
  if (!pos_z.empty()) {
    for (int i : pos_nz) nz.push_back(mu[i]);
    TautClass base = closure_any(g, nz);
    TautClass up = forget_pullback(base, static_cast<int>(pos_z.size()));
    // markings 1..|nz| are the nonzero parts, the rest are zeros
    std::vector<int> order(pos_nz);
    order.insert(order.end(), pos_z.begin(), pos_z.end());
    return unsort(up, order);
  }
  // positive parts only: push forward the identity for μ+ = (..., m_n + 1, -1)
  std::vector<int> plus(mu);
  plus.back() += 1;
  plus.push_back(-1);
  TautClass rhs = h_weighted(g, plus);
  StarSumOptions opt;
  opt.include_trivial = false;
  opt.skip = [n](const StarGraph& s) { return is_extremal_graph(s, n + 1); };
  rhs -= star_sum(g, plus, closure_any, opt);
  TautClass out = forget_pushforward(rhs);
  out *= ratio(1, mu.back() + 1);
  return out;
}

TautClass closure_sorted(int g, const std::vector<int>& mu) {
  auto key = std::make_pair(g, mu);
  {
    std::lock_guard lock(memo_lock);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    if (!in_progress.insert(key).second)
      throw std::logic_error("hclass/closure_class: recursion revisited its own key");
  }
  TautClass x;
  try {
    std::optional<TautClass> hit;
    if (store.load) hit = store.load(closure_key(g, mu));
    if (hit) {
      x = std::move(*hit);
    } else {
      x = compute_sorted(g, mu);
      if (store.save) store.save(closure_key(g, mu), x);
    }
  } catch (...) {
    std::lock_guard lock(memo_lock);
    in_progress.erase(key);
    throw;
  }
  std::lock_guard lock(memo_lock);
  in_progress.erase(key);
  auto [it, fresh] = memo.emplace(key, x);
  if (!fresh && !(it->second == x)) throw std::logic_error("hclass/closure_class: memo collision with a different value");
  return it->second;
}

TautClass sep_boundary(int n, unsigned S) {
  std::vector<int> legs(n);
  for (int i = 0; i < n; ++i) legs[i] = (S >> i) & 1 ? 1 : 0;
  return TautClass::boundary(StableGraph({1, 0}, legs, {{0, 1}}));
}

}  // namespace

TautClass star_sum(int g, const std::vector<int>& mu, const ClosureOracle& closure, const StarSumOptions& opt) {
  check_mu(g, mu, "star_sum");
  if (!meromorphic(mu)) throw std::invalid_argument("hclass/star_sum: mu must be strictly meromorphic");
  const int n = static_cast<int>(mu.size());
  TautClass out(g, n);
  for (const auto& s : enumerate_simple_star_graphs(g, mu, StarFilter::all, opt.include_trivial)) {
    if (opt.skip && opt.skip(s)) continue;
    const StableGraph& G = s.graph;
    for (const auto& I : enumerate_star_twists(s, mu)) {
      StarTerm term{s, I, Rational(1) / Rational(static_cast<unsigned long>(automorphism_order(G))), {}, false, {},
                    TautClass(g, n)};
      for (int x : I) term.weight *= x;
      for (int v = 0; v < G.num_vertices(); ++v) term.vertex_mu.push_back(slot_mu(s, I, mu, v));
      for (int v = 0; v < G.num_vertices(); ++v)
        if (v != s.center && G.genus(v) == 0) {
          term.dropped = true;
          term.reason = "genus-0 outlying vertex carries no holomorphic differential";
        }
      if (!term.dropped) {
        std::vector<TautClass> parts;
        for (int v = 0; v < G.num_vertices(); ++v) parts.push_back(closure(G.genus(v), term.vertex_mu[v]));
        term.value = compose_at_vertices(G, parts) * term.weight;
        out += term.value;
      }
      if (opt.audit) opt.audit->push_back(std::move(term));
    }
  }
  return out;
}

TautClass h_weighted(int g, const std::vector<int>& mu, HMode mode) {
  check_mu(g, mu, "h_weighted");
  if (!meromorphic(mu)) throw std::invalid_argument("hclass/h_weighted: mu must be strictly meromorphic");
  if (mode == HMode::pixton) {
    TautClass p = pixton_class(g, mu, g);
    mpz_class two;
    mpz_ui_pow_ui(two.get_mpz_t(), 2, g);
    return p * ratio(1, two);
  }
  if (g > 1) throw std::invalid_argument("hclass/h_weighted: star mode needs g <= 1");
  ClosureOracle oracle = [](int gv, const std::vector<int>& m) {
    return gv == 1 && meromorphic(m) ? closure_genus_one(m) : closure_class(gv, m);
  };
  return star_sum(g, mu, oracle);
}

void set_closure_store(ClosureStore s) {
  std::lock_guard lock(memo_lock);
  store = std::move(s);
}

std::string closure_key(int g, const std::vector<int>& mu) {
  std::vector<int> sorted(mu);
  std::sort(sorted.begin(), sorted.end());
  std::string out = "closure g=" + std::to_string(g) + " mu=";
  for (size_t i = 0; i < sorted.size(); ++i) out += (i ? "," : "") + std::to_string(sorted[i]);
  return out;
}

TautClass closure_class(int g, const std::vector<int>& mu) {
  check_mu(g, mu, "closure_class");
  return closure_any(g, mu);
}

TautClass closure_genus_one(const std::vector<int>& mu) {
  check_mu(1, mu, "closure_genus_one");
  if (!meromorphic(mu)) throw std::invalid_argument("hclass/closure_genus_one: mu must be strictly meromorphic");
  const int n = static_cast<int>(mu.size());
  TautClass out = TautClass::boundary(StableGraph({0}, std::vector<int>(n, 0), {{0, 0}})) * Rational(-1, 24);
  for (int i = 0; i < n; ++i) out += TautClass::psi(1, n, i + 1) * ratio(mu[i] * mu[i], 2);
  unsigned support = 0;
  for (int i = 0; i < n; ++i)
    if (mu[i] != 0) support |= 1u << i;
  for (unsigned S = 0; S < (1u << n); ++S) {
    if (__builtin_popcount(S) < 2) continue;
    int mS = 0;
    for (int i = 0; i < n; ++i)
      if ((S >> i) & 1) mS += mu[i];
    Rational c = ratio(-mS * mS, 2);
    if ((S & support) == support) c -= 1;
    if (c != 0) out += sep_boundary(n, S) * c;
  }
  return out;
}

TautClass closure_from_meromorphic_formula(int g, const std::vector<int>& mu) {
  check_mu(g, mu, "closure_from_meromorphic_formula");
  StarSumOptions opt;
  opt.include_trivial = false;
  return h_weighted(g, mu) - star_sum(g, mu, closure_any, opt);
}

ConjectureReport verify_conjecture_A(int g, const std::vector<int>& mu, int jobs) {
  check_mu(g, mu, "verify_conjecture_A");
  if (!meromorphic(mu)) throw std::invalid_argument("hclass/verify_conjecture_A: mu must be strictly meromorphic");
  ConjectureReport r;
  r.g = g;
  r.mu = mu;
  r.conjecture_free = g <= 1;
  ClosureOracle oracle = [](int gv, const std::vector<int>& m) {
    return gv == 1 && meromorphic(m) ? closure_genus_one(m) : closure_class(gv, m);
  };
  StarSumOptions opt;
  opt.audit = &r.terms;
  r.star_side = star_sum(g, mu, g <= 1 ? oracle : ClosureOracle(closure_any), opt);
  r.pixton_side = h_weighted(g, mu, HMode::pixton);
  r.verdict = equals_pairing(r.star_side, r.pixton_side, g, jobs);
  r.equal = r.verdict.equal;
  r.star_pairings = pairing_vector(r.star_side, g, jobs);
  r.pixton_pairings = pairing_vector(r.pixton_side, g, jobs);
  return r;
}

}  // namespace taut
