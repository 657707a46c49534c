#include "semiscale/tropical.hpp"

#include <string>

namespace semiscale {

ExtendedWeightMatrix ExtendedWeightMatrix::from_rows(
    const std::vector<std::vector<double>>& rows) {
  const Index n = rows.size();
  ExtendedWeightMatrix m(n);
  for (Index i = 0; i < n; ++i) {
    if (rows[i].size() != n)
      throw DimensionMismatch("weight matrix rows must all have length n");
    for (Index j = 0; j < n; ++j) {
      const double v = rows[i][j];
      m.set(i, j, v == -std::numeric_limits<double>::infinity() ? ExtReal::bottom()
                                                                : ExtReal(v));
    }
  }
  return m;
}

namespace {

// Reflexive-transitive boolean reachability over the support of mu.
std::vector<char> reachability(const ExtendedWeightMatrix& mu) {
  const Index n = mu.size();
  std::vector<char> r(n * n, 0);
  for (Index i = 0; i < n; ++i) {
    r[i * n + i] = 1;
    for (Index j = 0; j < n; ++j)
      if (mu(i, j).is_finite()) r[i * n + j] = 1;
  }
  for (Index k = 0; k < n; ++k)
    for (Index i = 0; i < n; ++i) {
      if (!r[i * n + k]) continue;
      for (Index j = 0; j < n; ++j)
        if (r[k * n + j]) r[i * n + j] = 1;
    }
  return r;
}

}  // namespace

WalkClosure walk_supremum(const ExtendedWeightMatrix& mu) {
  const Index n = mu.size();
  ExtendedWeightMatrix w = mu;
  for (Index k = 0; k < n; ++k)
    for (Index i = 0; i < n; ++i) {
      const ExtReal ik = w(i, k);
      if (ik.is_bottom()) continue;
      for (Index j = 0; j < n; ++j) w.set(i, j, max(w(i, j), ik + w(k, j)));
    }

  // A strictly positive closure diagonal marks a divergent vertex; every pair
  // that can route through one has supremum +inf.
  std::vector<char> on_positive_cycle(n, 0);
  bool any = false;
  for (Index v = 0; v < n; ++v)
    if (w(v, v).is_finite() && w(v, v).value() > kPositiveCycleTol) {
      on_positive_cycle[v] = 1;
      any = true;
    }

  std::vector<IndexPair> divergent;
  if (any) {
    const std::vector<char> reach = reachability(mu);
    for (Index x = 0; x < n; ++x)
      for (Index y = 0; y < n; ++y)
        for (Index v = 0; v < n; ++v)
          if (on_positive_cycle[v] && reach[x * n + v] && reach[v * n + y]) {
            divergent.emplace_back(x, y);
            break;
          }
  }
  return WalkClosure{std::move(w), std::move(divergent)};
}

const WalkClosure& assert_no_divergence(const WalkClosure& w) {
  if (w.divergent()) {
    std::string msg = "walk supremum diverges at";
    for (const auto& [x, y] : w.divergent_pairs) {
      msg += " (" + std::to_string(x + 1) + "," + std::to_string(y + 1) + ")";
      if (msg.size() > 120) {
        msg += " ...";
        break;
      }
    }
    throw DivergentError(msg, w.divergent_pairs);
  }
  return w;
}

}  // namespace semiscale
