#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "taut/rational.hpp"
#include "taut/stable_graph.hpp"
#include "taut/strata.hpp"

namespace taut {

/// Residues in {0, ..., r-1} per half-edge, legs first.
using WeightingModR = std::vector<int>;

/// Every admissible weighting of Γ mod r for the multiplicities μ (one entry
/// per leg). Tree edges are solved from the legs and vertex conditions, so the
/// result has r^{h1(Γ)} elements when the system is consistent and 0 otherwise.
std::vector<WeightingModR> admissible_weightings(const StableGraph& gamma, const std::vector<int>& mu, int r);

/// Degree-d part of Pixton's sum at a fixed r.
TautClass pixton_fixed_r(int g, const std::vector<int>& mu, int d, int r);

class InterpolationError : public std::runtime_error {
 public:
  InterpolationError(const std::string& what, std::vector<int> samples)
      : std::runtime_error(what), samples_(std::move(samples)) {}
  const std::vector<int>& samples() const { return samples_; }

 private:
  std::vector<int> samples_;
};

struct PixtonOptions {
  int jobs = 1;
  /// Cap on fit plus held-out samples before giving up.
  int max_samples = 64;
};

struct PixtonResult {
  TautClass cls;
  std::vector<int> fit_r;      // samples the interpolant was built from
  std::vector<int> holdout_r;  // samples it reproduced exactly
};

/// Constant term in r of the fixed-r class. Every generator coefficient is
/// interpolated separately and checked on three held-out values of r; the
/// fit grows until that succeeds. Throws InterpolationError at the cap.
/// Results are memoized per (g, μ, d).
PixtonResult pixton_class_detailed(int g, const std::vector<int>& mu, int d, const PixtonOptions& opt = {});
TautClass pixton_class(int g, const std::vector<int>& mu, int d, const PixtonOptions& opt = {});

/// Value at x = 0 of the polynomial through (xs[i], ys[i]).
Rational lagrange_at_zero(const std::vector<int>& xs, const std::vector<Rational>& ys);
/// Value at x of the same polynomial.
Rational lagrange_at(const std::vector<int>& xs, const std::vector<Rational>& ys, const Rational& x);

}  // namespace taut
