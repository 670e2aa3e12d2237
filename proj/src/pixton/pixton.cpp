#include "taut/pixton.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <queue>
#include <thread>

namespace taut {

namespace {

int mod(long v, int r) {
  long m = v % r;
  return static_cast<int>(m < 0 ? m + r : m);
}

// One summand shape: a graph and an exponent k_e >= 1 per edge. Its
// contribution at r is S(r) * T, with T independent of r.
struct Piece {
  const StableGraph* graph;
  std::vector<int> k;
  TautClass T;
};

struct Skeleton {
  std::vector<Piece> pieces;
  // canonical key -> (piece, coefficient of that key in piece.T)
  std::map<std::vector<int>, std::vector<std::pair<int, Rational>>> by_key;
  std::map<std::vector<int>, DecoratedStratum> strata;
};

// T for one piece: ξ_Γ* of exp(-κ_1) exp(m̃²ψ) and the k-th edge coefficients,
// degree d part, divided by |Aut Γ|.
TautClass piece_class(int g, const std::vector<int>& mu, int d, const StableGraph& G, const std::vector<int>& k) {
  const int n = G.num_legs();
  const int nv = G.num_vertices();
  const int ne = G.num_edges();
  TautClass out(g, n);
  const int rest = d - std::accumulate(k.begin(), k.end(), 0);
  if (rest < 0) return out;
  Rational base = Rational(1) / Rational(static_cast<unsigned long>(automorphism_order(G)));
  for (int e = 0; e < ne; ++e) base *= Rational(k[e] % 2 ? 1 : -1) / factorial(k[e]);

  // slots: vertices (κ_1 powers) then legs (ψ powers)
  std::vector<int> a(nv + n, 0), split(ne, 0);
  auto emit = [&]() {
    auto rec = [&](auto&& self, int e, Rational c, DecoratedStratum& s) -> void {
      if (e == ne) {
        out.add_term(s, c);
        return;
      }
      for (int j = 0; j < k[e]; ++j) {
        s.psi[G.half_edge(e, 0)] = j;
        s.psi[G.half_edge(e, 1)] = k[e] - 1 - j;
        self(self, e + 1, c * binomial(k[e] - 1, j), s);
      }
      s.psi[G.half_edge(e, 0)] = s.psi[G.half_edge(e, 1)] = 0;
    };
    DecoratedStratum s = DecoratedStratum::bare(G);
    Rational c = base;
    for (int v = 0; v < nv; ++v) {
      s.kappa[v].assign(a[v], 1);
      c *= Rational(a[v] % 2 ? -1 : 1) / factorial(a[v]);
    }
    for (int i = 0; i < n; ++i) {
      s.psi[i] = a[nv + i];
      mpz_class m2 = (mu[i] + 1) * (mu[i] + 1);
      mpz_class p;
      mpz_pow_ui(p.get_mpz_t(), m2.get_mpz_t(), a[nv + i]);
      c *= Rational(p) / factorial(a[nv + i]);
    }
    if (s.vanishes() || c == 0) return;
    rec(rec, 0, c, s);
  };
  auto distribute = [&](auto&& self, int slot, int left) -> void {
    if (slot == nv + n - 1) {
      a[slot] = left;
      emit();
      return;
    }
    for (int x = 0; x <= left; ++x) {
      a[slot] = x;
      self(self, slot + 1, left - x);
    }
  };
  distribute(distribute, 0, rest);
  return out;
}

const Skeleton& skeleton(int g, const std::vector<int>& mu, int d) {
  static std::mutex mu_lock;
  static std::map<std::tuple<int, std::vector<int>, int>, Skeleton> cache;
  auto key = std::make_tuple(g, mu, d);
  {
    std::lock_guard lock(mu_lock);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  const int n = static_cast<int>(mu.size());
  Skeleton sk;
  for (const auto& G : enumerate_stable_graphs(g, n)) {
    const int ne = G.num_edges();
    if (ne > d) continue;
    std::vector<int> k(ne, 1);
    auto rec = [&](auto&& self, int e, int left) -> void {
      if (e == ne) {
        TautClass T = piece_class(g, mu, d, G, k);
        if (!T.is_zero()) sk.pieces.push_back({&G, k, std::move(T)});
        return;
      }
      for (int x = 1; x <= left + 1; ++x) {
        k[e] = x;
        self(self, e + 1, left - (x - 1));
      }
      k[e] = 1;
    };
    rec(rec, 0, d - ne);
  }
  for (int p = 0; p < static_cast<int>(sk.pieces.size()); ++p)
    for (const auto& [kk, entry] : sk.pieces[p].T.terms()) {
      sk.by_key[kk].emplace_back(p, entry.coeff);
      sk.strata.emplace(kk, entry.stratum);
    }
  std::lock_guard lock(mu_lock);
  return cache.emplace(std::move(key), std::move(sk)).first->second;
}

// S(r) for every piece: r^{-h1} times the sum over weightings of ∏ (w w')^{k_e}.
std::vector<Rational> piece_sums(const Skeleton& sk, const std::vector<int>& mu, int r) {
  std::vector<Rational> out(sk.pieces.size());
  std::map<const StableGraph*, std::vector<WeightingModR>> ws;
  for (size_t p = 0; p < sk.pieces.size(); ++p) {
    const Piece& pc = sk.pieces[p];
    const StableGraph& G = *pc.graph;
    auto it = ws.find(&G);
    if (it == ws.end()) it = ws.emplace(&G, admissible_weightings(G, mu, r)).first;
    mpz_class total = 0;
    for (const auto& w : it->second) {
      mpz_class term = 1;
      for (int e = 0; e < G.num_edges(); ++e) {
        mpz_class x = mpz_class(w[G.half_edge(e, 0)]) * w[G.half_edge(e, 1)];
        mpz_class xp;
        mpz_pow_ui(xp.get_mpz_t(), x.get_mpz_t(), pc.k[e]);
        term *= xp;
      }
      total += term;
    }
    mpz_class denom;
    mpz_ui_pow_ui(denom.get_mpz_t(), r, G.h1());
    out[p] = ratio(total, denom);
  }
  return out;
}

void check_mu(int g, const std::vector<int>& mu, int d, const char* op) {
  if (std::accumulate(mu.begin(), mu.end(), 0) != 2 * g - 2)
    throw std::invalid_argument(std::string("pixton/") + op + ": parts of mu must sum to 2g-2");
  if (2 * g - 2 + static_cast<int>(mu.size()) <= 0)
    throw std::invalid_argument(std::string("pixton/") + op + ": unstable (g, n)");
  if (d < 0) throw std::invalid_argument(std::string("pixton/") + op + ": negative degree");
}

}  // namespace

std::vector<WeightingModR> admissible_weightings(const StableGraph& G, const std::vector<int>& mu, int r) {
  if (r < 1) throw std::invalid_argument("pixton/admissible_weightings: r must be positive");
  const int n = G.num_legs();
  const int nv = G.num_vertices();
  const int ne = G.num_edges();
  // spanning tree by BFS from vertex 0
  std::vector<int> parent_he(nv, -1), order;
  std::vector<bool> seen(nv, false), tree(ne, false);
  std::queue<int> q;
  q.push(0);
  seen[0] = true;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    order.push_back(v);
    for (int h : G.half_edges_at(v)) {
      if (G.is_leg(h)) continue;
      int u = G.vertex_of(G.partner(h));
      if (seen[u]) continue;
      seen[u] = true;
      tree[G.edge_of(h)] = true;
      parent_he[u] = G.partner(h);
      q.push(u);
    }
  }
  std::vector<int> free_edges;
  for (int e = 0; e < ne; ++e)
    if (!tree[e]) free_edges.push_back(e);

  std::vector<WeightingModR> out;
  WeightingModR w(G.num_half_edges(), 0);
  for (int i = 0; i < n; ++i) w[i] = mod(mu[i] + 1, r);
  std::vector<int> t(free_edges.size(), 0);
  while (true) {
    for (size_t j = 0; j < free_edges.size(); ++j) {
      w[G.half_edge(free_edges[j], 0)] = t[j];
      w[G.half_edge(free_edges[j], 1)] = mod(-t[j], r);
    }
    // leaves first: each non-root vertex fixes its parent edge
    bool ok = true;
    for (int idx = nv - 1; idx >= 0; --idx) {
      int v = order[idx];
      long sum = 0;
      for (int h : G.half_edges_at(v))
        if (h != parent_he[v]) sum += w[h];
      long target = 2 * G.genus(v) - 2 + G.valence(v);
      if (parent_he[v] < 0) {
        ok = mod(target - sum, r) == 0;
      } else {
        w[parent_he[v]] = mod(target - sum, r);
        w[G.partner(parent_he[v])] = mod(-w[parent_he[v]], r);
      }
    }
    if (ok) out.push_back(w);
    size_t j = 0;
    while (j < t.size() && ++t[j] == r) t[j++] = 0;
    if (j == t.size()) break;
  }
  return out;
}

TautClass pixton_fixed_r(int g, const std::vector<int>& mu, int d, int r) {
  check_mu(g, mu, d, "pixton_fixed_r");
  if (r < 1) throw std::invalid_argument("pixton/pixton_fixed_r: r must be positive");
  const int n = static_cast<int>(mu.size());
  TautClass out(g, n);
  if (d > 3 * g - 3 + n) return out;
  const Skeleton& sk = skeleton(g, mu, d);
  std::vector<Rational> S = piece_sums(sk, mu, r);
  for (const auto& [key, parts] : sk.by_key) {
    Rational c = 0;
    for (const auto& [p, coeff] : parts) c += coeff * S[p];
    if (c != 0) out.add_canonical(key, sk.strata.at(key), c);
  }
  return out;
}

Rational lagrange_at(const std::vector<int>& xs, const std::vector<Rational>& ys, const Rational& x) {
  Rational total = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    Rational term = ys[i];
    if (term == 0) continue;
    for (size_t j = 0; j < xs.size(); ++j)
      if (j != i) term *= (x - xs[j]) / Rational(xs[i] - xs[j]);
    total += term;
  }
  return total;
}

Rational lagrange_at_zero(const std::vector<int>& xs, const std::vector<Rational>& ys) {
  return lagrange_at(xs, ys, Rational(0));
}

PixtonResult pixton_class_detailed(int g, const std::vector<int>& mu, int d, const PixtonOptions& opt) {
  check_mu(g, mu, d, "pixton_class");
  static std::mutex memo_lock;
  static std::map<std::tuple<int, std::vector<int>, int>, PixtonResult> memo;
  auto key = std::make_tuple(g, mu, d);
  {
    std::lock_guard lock(memo_lock);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
  }
  const int n = static_cast<int>(mu.size());
  PixtonResult res{TautClass(g, n), {}, {}};
  if (d > 3 * g - 3 + n) {
    std::lock_guard lock(memo_lock);
    return memo.emplace(std::move(key), std::move(res)).first->second;
  }
  const Skeleton& sk = skeleton(g, mu, d);
  int abs_sum = 0;
  for (int m : mu) abs_sum += std::abs(m + 1);
  const int r0 = 2 * (abs_sum + d + 1);

  std::map<int, std::vector<Rational>> samples;  // r -> piece sums
  auto ensure = [&](const std::vector<int>& rs) {
    std::vector<int> todo;
    for (int r : rs)
      if (!samples.count(r)) todo.push_back(r);
    std::vector<std::vector<Rational>> vals(todo.size());
    auto work = [&](size_t begin, size_t step) {
      for (size_t i = begin; i < todo.size(); i += step) vals[i] = piece_sums(sk, mu, todo[i]);
    };
    const int jobs = std::max(1, opt.jobs);
    if (jobs == 1 || todo.size() < 2) {
      work(0, 1);
    } else {
      std::vector<std::thread> pool;
      for (int t = 0; t < jobs; ++t) pool.emplace_back(work, static_cast<size_t>(t), static_cast<size_t>(jobs));
      for (auto& th : pool) th.join();
    }
    for (size_t i = 0; i < todo.size(); ++i) samples.emplace(todo[i], std::move(vals[i]));
  };

  int fit = 2 * d + 2;
  while (true) {
    if (fit + 3 > opt.max_samples) {
      std::vector<int> used;
      for (const auto& [r, _] : samples) used.push_back(r);
      throw InterpolationError("pixton/pixton_class: interpolation did not stabilize within " +
                                   std::to_string(opt.max_samples) + " samples",
                               used);
    }
    std::vector<int> xs(fit), hold(3), all;
    std::iota(xs.begin(), xs.end(), r0);
    std::iota(hold.begin(), hold.end(), r0 + fit);
    all = xs;
    all.insert(all.end(), hold.begin(), hold.end());
    ensure(all);
    bool ok = true;
    TautClass cls(g, n);
    for (const auto& [k, parts] : sk.by_key) {
      auto coeff_at = [&](int r) {
        const auto& S = samples.at(r);
        Rational c = 0;
        for (const auto& [p, coeff] : parts) c += coeff * S[p];
        return c;
      };
      std::vector<Rational> ys;
      for (int r : xs) ys.push_back(coeff_at(r));
      for (int r : hold)
        if (lagrange_at(xs, ys, Rational(r)) != coeff_at(r)) ok = false;
      if (!ok) break;
      Rational c0 = lagrange_at_zero(xs, ys);
      if (c0 != 0) cls.add_canonical(k, sk.strata.at(k), c0);
    }
    if (ok) {
      res.cls = std::move(cls);
      res.fit_r = xs;
      res.holdout_r = hold;
      break;
    }
    fit *= 2;
  }
  std::lock_guard lock(memo_lock);
  return memo.emplace(std::move(key), std::move(res)).first->second;
}

TautClass pixton_class(int g, const std::vector<int>& mu, int d, const PixtonOptions& opt) {
  return pixton_class_detailed(g, mu, d, opt).cls;
}

}  // namespace taut
