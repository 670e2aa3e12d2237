#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "doctest.h"
#include "taut/intersect.hpp"

using namespace taut;

namespace {

std::vector<int> random_exponents(std::mt19937& rng, int g, int n) {
  std::vector<int> a(n, 0);
  int left = 3 * g - 3 + n;
  while (left > 0) {
    ++a[rng() % n];
    --left;
  }
  return a;
}

}  // namespace

TEST_CASE("base psi integrals") {
  CHECK(psi_integral(0, {0, 0, 0}) == 1);
  for (int i = 0; i < 4; ++i) {
    std::vector<int> a(4, 0);
    a[i] = 1;
    CHECK(psi_integral(0, a) == 1);
  }
  CHECK(psi_integral(1, {1}) == Rational(1, 24));
  CHECK(psi_integral(0, {1, 1, 0, 0, 0}) == 2);
  CHECK_THROWS_AS(psi_integral(1, {2}), std::invalid_argument);
}

TEST_CASE("psi integrals match the frozen oracle") {
  std::ifstream in(TAUT_ORACLE_DIR "/psi_fixtures.txt");
  REQUIRE(in.good());
  std::string line;
  int count = 0;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::vector<std::string> tok;
    for (std::string t; ss >> t;) tok.push_back(t);
    int g = std::stoi(tok[0]);
    std::vector<int> a;
    for (size_t i = 1; i + 1 < tok.size(); ++i) a.push_back(std::stoi(tok[i]));
    CHECK(psi_integral(g, a) == parse_rational(tok.back()));
    ++count;
  }
  CHECK(count > 20);
}

TEST_CASE("string and dilaton equations") {
  std::mt19937 rng(7);
  // string: a has degree 3g-2+n on n points, so τ_0 τ_a is top on (g, n+1)
  int checked = 0;
  for (int t = 0; checked < 50; ++t) {
    int g = rng() % 4;
    int n = 1 + rng() % 4;
    if (2 * g - 2 + n <= 0) continue;
    // exponents on n points of total degree 3g-3+(n+1)
    std::vector<int> a(n, 0);
    for (int left = 3 * g - 2 + n; left > 0; --left) ++a[rng() % n];
    std::vector<int> s = a;
    s.push_back(0);
    Rational expect = 0;
    for (int i = 0; i < n; ++i) {
      if (a[i] == 0) continue;
      std::vector<int> b = a;
      --b[i];
      expect += psi_integral(g, b);
    }
    CHECK(psi_integral(g, s) == expect);
    ++checked;
  }
  checked = 0;
  for (int t = 0; checked < 50; ++t) {
    int g = rng() % 4;
    int n = 1 + rng() % 4;
    if (2 * g - 2 + n <= 0) continue;
    auto a = random_exponents(rng, g, n);
    std::vector<int> s = a;
    s.push_back(1);
    CHECK(psi_integral(g, s) == Rational(2 * g - 2 + n) * psi_integral(g, a));
    ++checked;
  }
}

TEST_CASE("kappa integrals") {
  CHECK(kappa_psi_integral(1, {1}, {0}) == Rational(1, 24));
  CHECK(kappa_psi_integral(1, {1}, {0}) == psi_integral(1, {0, 2}));
  CHECK(kappa_psi_integral(0, {1}, {0, 0, 0, 0}) == 1);
  CHECK(kappa_psi_integral(0, {2}, {0, 0, 0, 0, 0}) == 1);
  CHECK(kappa_psi_integral(0, {1, 1}, {0, 0, 0, 0, 0}) == 5);
  CHECK(kappa_psi_integral(1, {0, 1}, {0}) == Rational(1, 24));
  CHECK(kappa_psi_integral(2, {0}, {1, 0, 3, 3}) == Rational(6) * psi_integral(2, {1, 0, 3, 3}));
  // ∫_{Mbar_{0,4}} κ_1 via its definition and the string equation
  CHECK(kappa_psi_integral(0, {1}, {0, 0, 0, 0}) == psi_integral(0, {0, 0, 0, 0, 2}));
  // κ_3 on Mbar_2 is ∫ψ^4 on Mbar_{2,1}
  CHECK(kappa_psi_integral(2, {3}, {}) == psi_integral(2, {4}));
  CHECK_THROWS_AS(kappa_psi_integral(1, {2}, {0}), std::invalid_argument);
}

TEST_CASE("evaluate and pairings") {
  CHECK(evaluate(TautClass::psi(0, 4, 1)) == 1);
  StableGraph loop({0}, {0}, {{0, 0}});
  CHECK(evaluate(TautClass::boundary(loop)) == 1);
  CHECK(evaluate(TautClass(1, 1)) == 0);
  CHECK_THROWS_AS(evaluate(TautClass::unit(0, 4)), std::domain_error);

  StableGraph d12({0, 0}, {0, 0, 1, 1}, {{0, 1}});
  auto v = equals_pairing(TautClass::psi(0, 4, 1), TautClass::boundary(d12));
  CHECK(v.equal);
  CHECK(v.semantics == "pairing");
  CHECK(v.generators_checked == 1);
  auto same = equals_pairing(TautClass::psi(0, 4, 1), TautClass::psi(0, 4, 1));
  CHECK(same.equal);
  auto diff = equals_pairing(TautClass::psi(0, 4, 1), TautClass::psi(0, 4, 1) * Rational(2));
  CHECK_FALSE(diff.equal);
  REQUIRE(diff.witness);
  CHECK(diff.witness->stratum.graph.num_edges() == 0);
  CHECK(diff.witness->stratum.degree() == 0);
  CHECK(diff.witness_x == 1);
  CHECK(diff.witness_y == 2);
}

TEST_CASE("pair is symmetric") {
  std::mt19937 rng(3);
  for (auto [g, n] : std::vector<std::pair<int, int>>{{0, 5}, {1, 2}, {1, 3}, {2, 1}}) {
    const int top = 3 * g - 3 + n;
    for (int d = 0; d <= top; ++d) {
      const auto& A = generators(g, n, d);
      const auto& B = generators(g, n, top - d);
      for (int t = 0; t < 3; ++t) {
        const auto& a = A[rng() % A.size()];
        const auto& b = B[rng() % B.size()];
        TautClass xa(g, n), yb(g, n);
        xa.add_canonical(a.key, a.stratum, 1);
        yb.add_canonical(b.key, b.stratum, 1);
        CHECK(pair(xa, yb) == pair(yb, xa));
      }
    }
  }
}
