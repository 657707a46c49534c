#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "semiscale/errors.hpp"
#include "semiscale/nonneg_matrix.hpp"
#include "semiscale/tropical.hpp"

namespace semiscale {

enum class PotentialOrientation { into_basepoint, out_of_basepoint };

/// Additive potential rho with W(x, y) <= rho(x) - rho(y) for all pairs,
/// anchored at a basepoint: rho(x) = W(x, x0) (into) or -W(x0, x) (out).
struct AdditivePotential {
  std::vector<double> rho;
  Index basepoint = 0;
  PotentialOrientation orientation = PotentialOrientation::into_basepoint;
};

/// Strictly positive per-index scaling vector d certifying domination
/// inequalities f(x, y) <= d(x)/d(y). When `bound` is set, every entry is
/// certified to lie in [1/bound, bound].
struct ScalingVector {
  Eigen::VectorXd d;
  std::optional<double> bound;

  Index size() const { return static_cast<Index>(d.size()); }
};

/// Multiplicative walk closure: entry (x, y) is the supremum of entry
/// products over all walks x -> y (a single edge counts as a walk). Divergent
/// pairs mirror cycles with product > 1.
struct ProductClosure {
  NonnegMatrix entries;
  std::vector<IndexPair> divergent_pairs;

  Index size() const { return entries.size(); }
  bool divergent() const { return !divergent_pairs.empty(); }
};

/// rho(x) = W(x, x0) when the x0 column is finite, else rho(x) = -W(x0, x)
/// when the row is; into-basepoint wins when both work. Throws
/// BasepointUnusable when neither does, DivergentError on a divergent input.
AdditivePotential potential_from_basepoint(const WalkClosure& w, Index x0);

/// First basepoint 0, 1, ... admitting a potential, into-basepoint preferred.
AdditivePotential auto_potential(const WalkClosure& w);

/// Raises every entry below -K (including absent edges) to exactly -K.
/// Requires the walk supremum of mu to be finite and bounded by K; the output
/// lambda then satisfies mu <= lambda, all lambda entries in [-K, K], and
/// W_mu <= W_lambda <= K.
ExtendedWeightMatrix bump(const ExtendedWeightMatrix& mu, double K);

/// Log-domain transport of walk_supremum: C_f = exp(W_{log f}) with 0 <-> -inf.
ProductClosure mult_walk_supremum(const NonnegMatrix& f);

/// d(x) = C(x, x0) when that column is positive, else d(x) = 1/C(x0, x).
/// C must be a non-divergent multiplicative closure; then
/// f <= C(x, y) <= d(x)/d(y) for all pairs.
ScalingVector scaling_from_basepoint(const NonnegMatrix& C, Index x0);

/// First basepoint 0, 1, ... usable for scaling_from_basepoint.
ScalingVector auto_scaling(const NonnegMatrix& C);

/// Bounded-range scaling: requires C_f <= M entrywise (checked) and M >= 1.
/// Bumps entries below 1/M up to 1/M, closes, and anchors at basepoint 0,
/// yielding d with entries in [1/M, M] and f(x, y) <= d(x)/d(y).
ScalingVector bounded_scaling(const NonnegMatrix& f, double M);

/// True iff f(x, y) * f(y, z) <= f(x, z) + tol for every triple.
bool is_compressed(const NonnegMatrix& f, double tol = 1e-9);

}  // namespace semiscale
