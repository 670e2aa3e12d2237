#pragma once

#include <optional>
#include <string>
#include <vector>

#include "taut/rational.hpp"
#include "taut/strata.hpp"

namespace taut {

/// ∫ ψ_1^{a_1} ... ψ_n^{a_n} over Mbar_{g,n}. Zero outside the stable range.
/// Throws std::invalid_argument unless sum(a) = 3g-3+n.
Rational psi_integral(int g, const std::vector<int>& exponents);

/// ∫ κ_{e_1} ... κ_{e_m} ψ^a over Mbar_{g,n}, n = a.size(). κ_0 entries are
/// the scalar 2g-2+n. Throws std::invalid_argument on a degree mismatch.
Rational kappa_psi_integral(int g, const std::vector<int>& kappa, const std::vector<int>& psi);

/// Integral of a generator; zero unless every vertex is in top degree.
Rational integrate(const DecoratedStratum& s);

/// Integral of a class homogeneous of degree 3g-3+n. Throws std::domain_error
/// on terms of any other degree.
Rational evaluate(const TautClass& x);

/// ∫ x·y; degrees must add up to the dimension.
Rational pair(const TautClass& x, const TautClass& y);

struct PairingVerdict {
  bool equal = true;
  int degree = 0;                 // degree of the classes compared
  int generators_checked = 0;     // complementary-degree generators used
  std::optional<CanonicalStratum> witness;
  Rational witness_x, witness_y;  // pairings of x and y with the witness
  /// Always "pairing": equality is certified modulo the pairing kernel only.
  std::string semantics = "pairing";
};

/// Pairs x - y with every generator of complementary degree. The degree is
/// inferred from the terms when `degree` < 0. `jobs` > 1 splits the
/// generators across threads.
PairingVerdict equals_pairing(const TautClass& x, const TautClass& y, int degree = -1, int jobs = 1);

/// Pairings of x with every generator of complementary degree to `degree`,
/// in generator order.
std::vector<Rational> pairing_vector(const TautClass& x, int degree, int jobs = 1);

}  // namespace taut
