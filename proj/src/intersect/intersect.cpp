#include "taut/intersect.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace taut {

namespace {

std::mutex psi_mu;
std::map<std::pair<int, std::vector<int>>, Rational> psi_cache;

Rational psi_sorted(int g, std::vector<int> a);

// ⟨τ_{a_1} ... τ_{a_n}⟩_g with a possibly non-top degree (then zero).
Rational correlator(int g, std::vector<int> a) {
  const int n = static_cast<int>(a.size());
  if (g < 0 || 2 * g - 2 + n <= 0) return 0;
  for (int x : a)
    if (x < 0) return 0;
  if (std::accumulate(a.begin(), a.end(), 0) != 3 * g - 3 + n) return 0;
  std::sort(a.begin(), a.end());
  return psi_sorted(g, std::move(a));
}

// Dijkgraaf-Verlinde-Verlinde recursion on the largest exponent.
Rational psi_sorted(int g, std::vector<int> a) {
  {
    std::lock_guard lock(psi_mu);
    auto it = psi_cache.find({g, a});
    if (it != psi_cache.end()) return it->second;
  }
  Rational result;
  const int n = static_cast<int>(a.size());
  if (g == 0 && n == 3) {
    result = 1;
  } else if (g == 1 && n == 1) {
    result = Rational(1, 24);
  } else if (a.back() == 0) {
    result = 0;  // all τ_0 outside (0,3)
  } else {
    const int k = a.back() - 1;
    std::vector<int> d(a.begin(), a.end() - 1);
    const int m = static_cast<int>(d.size());
    Rational sum = 0;
    for (int j = 0; j < m; ++j) {
      std::vector<int> b = d;
      b[j] += k;
      sum += double_factorial(2 * k + 2 * d[j] + 1) / double_factorial(2 * d[j] - 1) * correlator(g, b);
    }
    Rational half = 0;
    for (int r = 0; r <= k - 1; ++r) {
      const int s = k - 1 - r;
      Rational w = double_factorial(2 * r + 1) * double_factorial(2 * s + 1);
      std::vector<int> b = d;
      b.push_back(r);
      b.push_back(s);
      Rational inner = correlator(g - 1, b);
      for (unsigned mask = 0; mask < (1u << m); ++mask) {
        std::vector<int> left{r}, right{s};
        for (int j = 0; j < m; ++j) ((mask >> j) & 1 ? left : right).push_back(d[j]);
        for (int g1 = 0; g1 <= g; ++g1) inner += correlator(g1, left) * correlator(g - g1, right);
      }
      half += w * inner;
    }
    result = (sum + half / 2) / double_factorial(2 * k + 3);
  }
  std::lock_guard lock(psi_mu);
  psi_cache.emplace(std::make_pair(g, std::move(a)), result);
  return result;
}

std::mutex kappa_mu;
std::map<std::tuple<int, std::vector<int>, std::vector<int>>, Rational> kappa_cache;

}  // namespace

Rational psi_integral(int g, const std::vector<int>& exponents) {
  const int n = static_cast<int>(exponents.size());
  for (int x : exponents)
    if (x < 0) throw std::invalid_argument("intersect/psi_integral: negative exponent");
  if (std::accumulate(exponents.begin(), exponents.end(), 0) != 3 * g - 3 + n)
    throw std::invalid_argument("intersect/psi_integral: degree differs from 3g-3+n");
  return correlator(g, exponents);
}

Rational kappa_psi_integral(int g, const std::vector<int>& kappa, const std::vector<int>& psi) {
  const int n = static_cast<int>(psi.size());
  int deg = std::accumulate(psi.begin(), psi.end(), 0);
  for (int e : kappa) {
    if (e < 0) throw std::invalid_argument("intersect/kappa_psi_integral: negative kappa index");
    deg += e;
  }
  if (deg != 3 * g - 3 + n)
    throw std::invalid_argument("intersect/kappa_psi_integral: degree differs from 3g-3+n");
  if (2 * g - 2 + n <= 0) return 0;
  std::vector<int> k(kappa), p(psi);
  std::sort(k.begin(), k.end());
  std::sort(p.begin(), p.end());
  Rational scalar = 1;
  while (!k.empty() && k.front() == 0) {
    scalar *= 2 * g - 2 + n;
    k.erase(k.begin());
  }
  if (k.empty()) return scalar * correlator(g, p);
  auto key = std::make_tuple(g, k, p);
  {
    std::lock_guard lock(kappa_mu);
    auto it = kappa_cache.find(key);
    if (it != kappa_cache.end()) return scalar * it->second;
  }
  // κ_{e1} = π_*(ψ_{n+1}^{e1+1}); the other κ pull back as κ_e - ψ_{n+1}^e
  const int e1 = k.back();
  std::vector<int> rest(k.begin(), k.end() - 1);
  const int m = static_cast<int>(rest.size());
  Rational total = 0;
  for (unsigned J = 0; J < (1u << m); ++J) {
    int extra = 0;
    std::vector<int> kept;
    for (int j = 0; j < m; ++j) {
      if ((J >> j) & 1)
        extra += rest[j];
      else
        kept.push_back(rest[j]);
    }
    std::vector<int> q = p;
    q.push_back(e1 + 1 + extra);
    Rational v = kappa_psi_integral(g, kept, q);
    total += (__builtin_popcount(J) % 2) ? Rational(-v) : v;
  }
  std::lock_guard lock(kappa_mu);
  kappa_cache.emplace(std::move(key), total);
  return scalar * total;
}

Rational integrate(const DecoratedStratum& s) {
  const StableGraph& G = s.graph;
  Rational out = 1;
  std::vector<std::vector<int>> psi(G.num_vertices());
  for (int h = 0; h < G.num_half_edges(); ++h) psi[G.vertex_of(h)].push_back(s.psi[h]);
  for (int v = 0; v < G.num_vertices(); ++v) {
    int d = std::accumulate(s.kappa[v].begin(), s.kappa[v].end(), 0) +
            std::accumulate(psi[v].begin(), psi[v].end(), 0);
    if (d != G.vertex_dimension(v)) return 0;
  }
  for (int v = 0; v < G.num_vertices(); ++v) {
    out *= kappa_psi_integral(G.genus(v), s.kappa[v], psi[v]);
    if (out == 0) return out;
  }
  return out;
}

Rational evaluate(const TautClass& x) {
  const int top = 3 * x.genus() - 3 + x.markings();
  Rational total = 0;
  for (const auto& [_, e] : x.terms()) {
    if (e.stratum.degree() != top)
      throw std::domain_error("intersect/evaluate: term of degree " + std::to_string(e.stratum.degree()) +
                              " in a class on a space of dimension " + std::to_string(top));
    total += e.coeff * integrate(e.stratum);
  }
  return total;
}

Rational pair(const TautClass& x, const TautClass& y) {
  const int top = 3 * x.genus() - 3 + x.markings();
  for (const auto& [_, a] : x.terms())
    for (const auto& [__, b] : y.terms())
      if (a.stratum.degree() + b.stratum.degree() != top)
        throw std::domain_error("intersect/pair: degrees do not add up to the dimension");
  Rational total = 0;
  for_each_product_term(x, y, [&](const DecoratedStratum& s, const Rational& c) { total += c * integrate(s); });
  return total;
}

namespace {

int infer_degree(const TautClass& x) {
  int d = -1;
  for (const auto& [_, e] : x.terms()) {
    int k = e.stratum.degree();
    if (d >= 0 && k != d) throw std::domain_error("intersect: class is not homogeneous");
    d = k;
  }
  return d;
}

std::vector<Rational> pair_all(const TautClass& x, const std::vector<CanonicalStratum>& gens, int jobs) {
  std::vector<Rational> out(gens.size());
  auto work = [&](size_t begin, size_t step) {
    for (size_t i = begin; i < gens.size(); i += step) {
      TautClass b(x.genus(), x.markings());
      b.add_canonical(gens[i].key, gens[i].stratum, 1);
      out[i] = pair(x, b);
    }
  };
  if (jobs <= 1 || gens.size() < 2) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(work, static_cast<size_t>(t), static_cast<size_t>(jobs));
    for (auto& th : pool) th.join();
  }
  return out;
}

}  // namespace

std::vector<Rational> pairing_vector(const TautClass& x, int degree, int jobs) {
  const int top = 3 * x.genus() - 3 + x.markings();
  if (degree < 0 || degree > top) return {};
  return pair_all(x, generators(x.genus(), x.markings(), top - degree), jobs);
}

PairingVerdict equals_pairing(const TautClass& x, const TautClass& y, int degree, int jobs) {
  if (x.genus() != y.genus() || x.markings() != y.markings())
    throw std::invalid_argument("intersect/equals_pairing: ambient mismatch");
  int dx = infer_degree(x), dy = infer_degree(y);
  if (degree < 0) degree = dx >= 0 ? dx : dy;
  if ((dx >= 0 && dx != degree) || (dy >= 0 && dy != degree))
    throw std::domain_error("intersect/equals_pairing: degree mismatch");
  PairingVerdict v;
  v.degree = degree;
  const int top = 3 * x.genus() - 3 + x.markings();
  if (degree < 0 || degree > top) return v;
  const auto& gens = generators(x.genus(), x.markings(), top - degree);
  v.generators_checked = static_cast<int>(gens.size());
  TautClass z = x - y;
  std::vector<Rational> vals = pair_all(z, gens, jobs);
  for (size_t i = 0; i < gens.size(); ++i) {
    if (vals[i] != 0) {
      v.equal = false;
      v.witness = gens[i];
      TautClass b(x.genus(), x.markings());
      b.add_canonical(gens[i].key, gens[i].stratum, 1);
      v.witness_x = pair(x, b);
      v.witness_y = pair(y, b);
      break;
    }
  }
  return v;
}

}  // namespace taut
