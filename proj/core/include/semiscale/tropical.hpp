#pragma once

#include <cstddef>
#include <vector>

#include "semiscale/errors.hpp"
#include "semiscale/extreal.hpp"

namespace semiscale {

/// Square matrix of edge weights over the max-plus semiring. Entry (x, y) is
/// the weight of the edge x -> y; bottom (-inf) means the edge is absent.
/// Loops are allowed. Indices are 0-based here; reports are 1-based.
class ExtendedWeightMatrix {
 public:
  explicit ExtendedWeightMatrix(Index n) : n_(n), entries_(n * n) {
    if (n == 0) throw DimensionMismatch("weight matrix must have at least one vertex");
  }

  /// Rows given as doubles; -inf marks an absent edge. Throws on NaN/+inf.
  static ExtendedWeightMatrix from_rows(const std::vector<std::vector<double>>& rows);

  Index size() const { return n_; }
  ExtReal operator()(Index x, Index y) const { return entries_[x * n_ + y]; }
  void set(Index x, Index y, ExtReal w) { entries_[x * n_ + y] = w; }

  friend bool operator==(const ExtendedWeightMatrix&, const ExtendedWeightMatrix&) = default;

 private:
  Index n_;
  std::vector<ExtReal> entries_;
};

/// All-pairs supremal walk weights. Entry (x, y) is the supremum of summed
/// edge weights over all walks x -> y with at least one edge. Pairs whose
/// supremum is +inf (a strictly positive cycle lies on some x -> y walk) are
/// listed in divergent_pairs; their entries hold the finite value reached by
/// the closure sweep, which is only a lower bound.
struct WalkClosure {
  ExtendedWeightMatrix entries;
  std::vector<IndexPair> divergent_pairs;

  Index size() const { return entries.size(); }
  bool divergent() const { return !divergent_pairs.empty(); }
};

/// Diagonal entries above this threshold mark a strictly positive cycle;
/// values within it are treated as zero-weight cycles so that rounding noise
/// cannot spuriously diverge.
inline constexpr double kPositiveCycleTol = 1e-12;

/// Max-plus Kleene plus A+ = A (+) A^2 (+) ... via a Floyd-Warshall-style
/// triple loop, O(n^3). The closure diagonal is not seeded with 0: W(x, x)
/// comes only from genuine cycles (walks have at least one edge).
WalkClosure walk_supremum(const ExtendedWeightMatrix& mu);

/// Returns w unchanged when no pair diverges; otherwise throws DivergentError
/// carrying the offending pairs (the standing finiteness hypothesis fails).
const WalkClosure& assert_no_divergence(const WalkClosure& w);

}  // namespace semiscale
