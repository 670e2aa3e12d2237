#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "taut/intersect.hpp"
#include "taut/pixton.hpp"
#include "taut/strata.hpp"
#include "taut/twist.hpp"

namespace taut {

/// Supplies [Hbar_g(μ)] for a vertex slot.
using ClosureOracle = std::function<TautClass(int g, const std::vector<int>& mu)>;

/// One (Γ, I) summand of the star-graph formula, kept for audit.
struct StarTerm {
  StarGraph star;
  StarTwist twist;
  Rational weight;                            // ∏ I(e) / |Aut Γ|
  std::vector<std::vector<int>> vertex_mu;    // slot vectors fed to the oracle
  bool dropped = false;
  std::string reason;                         // why a dropped term is zero
  TautClass value;                            // weight · ξ_Γ*[...], zero if dropped
};

struct StarSumOptions {
  bool include_trivial = true;
  /// Graphs to leave out of the sum.
  std::function<bool(const StarGraph&)> skip;
  /// Receives every term, dropped ones included.
  std::vector<StarTerm>* audit = nullptr;
};

/// Σ over simple star graphs and their twists of ∏ I(e)/|Aut Γ| times the
/// glued closure classes (center: μ[v0], -I-1; outlying: μ[v], I-1).
/// Terms with a genus-0 outlying vertex are dropped.
TautClass star_sum(int g, const std::vector<int>& mu, const ClosureOracle& closure, const StarSumOptions& opt = {});

enum class HMode {
  pixton,  // 2^{-g} P^g, assuming the identity H = 2^{-g} P^g
  star,    // the star sum itself; needs no conjecture for g <= 1
};

/// H_{g,μ} for strictly meromorphic μ.
TautClass h_weighted(int g, const std::vector<int>& mu, HMode mode = HMode::pixton);

/// [Hbar_g(μ)] for k = 1, by the recursion over star graphs. Memoized on the
/// sorted μ; the result is relabeled to the input order.
TautClass closure_class(int g, const std::vector<int>& mu);

/// Optional persistent backing for closure_class, consulted after the
/// in-process memo and filled on every fresh computation.
struct ClosureStore {
  std::function<std::optional<TautClass>(const std::string& key)> load;
  std::function<void(const std::string& key, const TautClass&)> save;
};
void set_closure_store(ClosureStore store);

/// Store key of a closure class: "closure g=<g> mu=<ascending parts>".
std::string closure_key(int g, const std::vector<int>& mu);

/// Conjecture-free genus-one closure for strictly meromorphic μ:
/// DR_1(μ) - Σ_{S ⊇ supp μ} δ_0^S, with DR_1 in genus one given by
/// -λ_1 + Σ m_j²/2 ψ_j - 1/2 Σ_S m_S² δ_0^S and λ_1 = ξ_loop*(1)/24.
TautClass closure_genus_one(const std::vector<int>& mu);

/// H_{g,μ} minus the nontrivial star terms, with no base rules applied to
/// (g, μ) itself. Agrees with closure_class away from the residue rule.
TautClass closure_from_meromorphic_formula(int g, const std::vector<int>& mu);

struct ConjectureReport {
  int g = 0;
  std::vector<int> mu;
  bool equal = false;
  bool conjecture_free = false;  // star side never assumed H = 2^{-g} P^g
  PairingVerdict verdict;
  TautClass star_side, pixton_side;
  std::vector<StarTerm> terms;
  std::vector<Rational> star_pairings, pixton_pairings;
  std::string verdict_name() const { return equal ? "EQUAL-UNDER-PAIRING" : "DISTINCT"; }
};

/// Compares the star sum with 2^{-g} P^g under the pairing. For g <= 1 the
/// star side uses only conjecture-free closures.
ConjectureReport verify_conjecture_A(int g, const std::vector<int>& mu, int jobs = 1);

}  // namespace taut
