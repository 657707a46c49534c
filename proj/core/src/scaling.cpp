#include "semiscale/scaling.hpp"

#include <cmath>
#include <string>

namespace semiscale {

namespace {

bool column_finite(const WalkClosure& w, Index x0) {
  for (Index x = 0; x < w.size(); ++x)
    if (w.entries(x, x0).is_bottom()) return false;
  return true;
}

bool row_finite(const WalkClosure& w, Index x0) {
  for (Index x = 0; x < w.size(); ++x)
    if (w.entries(x0, x).is_bottom()) return false;
  return true;
}

}  // namespace

AdditivePotential potential_from_basepoint(const WalkClosure& w, Index x0) {
  assert_no_divergence(w);
  const Index n = w.size();
  if (x0 >= n) throw DimensionMismatch("basepoint index out of range");

  AdditivePotential p;
  p.basepoint = x0;
  p.rho.resize(n);
  if (column_finite(w, x0)) {
    p.orientation = PotentialOrientation::into_basepoint;
    for (Index x = 0; x < n; ++x) p.rho[x] = w.entries(x, x0).value();
    return p;
  }
  if (row_finite(w, x0)) {
    p.orientation = PotentialOrientation::out_of_basepoint;
    for (Index x = 0; x < n; ++x) p.rho[x] = -w.entries(x0, x).value();
    return p;
  }
  throw BasepointUnusable("no finite walk column or row through basepoint " +
                          std::to_string(x0 + 1));
}

AdditivePotential auto_potential(const WalkClosure& w) {
  assert_no_divergence(w);
  for (Index x0 = 0; x0 < w.size(); ++x0) {
    if (column_finite(w, x0) || row_finite(w, x0))
      return potential_from_basepoint(w, x0);
  }
  throw BasepointUnusable("no usable basepoint: every row and column has an absent walk");
}

ExtendedWeightMatrix bump(const ExtendedWeightMatrix& mu, double K) {
  if (!(K > 0.0)) throw PreconditionViolated("bump requires K > 0");
  const WalkClosure w = walk_supremum(mu);
  if (w.divergent())
    throw PreconditionViolated("bump: walk supremum diverges, so W <= K fails");
  const Index n = mu.size();
  for (Index x = 0; x < n; ++x)
    for (Index y = 0; y < n; ++y)
      if (w.entries(x, y).is_finite() && w.entries(x, y).value() > K)
        throw PreconditionViolated("bump: W(" + std::to_string(x + 1) + "," +
                                   std::to_string(y + 1) + ") exceeds K");

  ExtendedWeightMatrix lambda(n);
  for (Index x = 0; x < n; ++x)
    for (Index y = 0; y < n; ++y) lambda.set(x, y, max(mu(x, y), ExtReal(-K)));
  return lambda;
}

ProductClosure mult_walk_supremum(const NonnegMatrix& f) {
  const Index n = f.size();
  ExtendedWeightMatrix logf(n);
  for (Index x = 0; x < n; ++x)
    for (Index y = 0; y < n; ++y) {
      const double v = f(x, y);
      logf.set(x, y, v == 0.0 ? ExtReal::bottom() : ExtReal(std::log(v)));
    }
  WalkClosure w = walk_supremum(logf);
  Eigen::MatrixXd c(n, n);
  for (Index x = 0; x < n; ++x)
    for (Index y = 0; y < n; ++y) {
      const ExtReal e = w.entries(x, y);
      double v = e.is_bottom() ? 0.0 : std::exp(e.value());
      // Entries at divergent pairs are only finite lower bounds; keep them
      // representable when the log-domain value overflows exp.
      if (!std::isfinite(v)) v = std::numeric_limits<double>::max();
      c(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) = v;
    }
  return ProductClosure{NonnegMatrix(std::move(c)), std::move(w.divergent_pairs)};
}

ScalingVector scaling_from_basepoint(const NonnegMatrix& C, Index x0) {
  const Index n = C.size();
  if (x0 >= n) throw DimensionMismatch("basepoint index out of range");

  bool col_pos = true, row_pos = true;
  for (Index x = 0; x < n; ++x) {
    if (!(C(x, x0) > 0.0)) col_pos = false;
    if (!(C(x0, x) > 0.0)) row_pos = false;
  }
  ScalingVector sv;
  sv.d.resize(static_cast<Eigen::Index>(n));
  if (col_pos) {
    for (Index x = 0; x < n; ++x) sv.d[static_cast<Eigen::Index>(x)] = C(x, x0);
    return sv;
  }
  if (row_pos) {
    for (Index x = 0; x < n; ++x) sv.d[static_cast<Eigen::Index>(x)] = 1.0 / C(x0, x);
    return sv;
  }
  throw BasepointUnusable("closure column and row through basepoint " +
                          std::to_string(x0 + 1) + " both contain zeros");
}

ScalingVector auto_scaling(const NonnegMatrix& C) {
  for (Index x0 = 0; x0 < C.size(); ++x0) {
    try {
      return scaling_from_basepoint(C, x0);
    } catch (const BasepointUnusable&) {
    }
  }
  throw BasepointUnusable("no usable basepoint: every closure row and column has zeros");
}

ScalingVector bounded_scaling(const NonnegMatrix& f, double M) {
  if (!(M >= 1.0)) throw PreconditionViolated("bounded scaling requires M >= 1");
  const ProductClosure cf = mult_walk_supremum(f);
  if (cf.divergent())
    throw PreconditionViolated("bounded scaling: multiplicative closure diverges");
  // Relative slack: the log/exp transport rounds at ~1e-15, and a compressed
  // sup function legitimately closes onto exactly M.
  if (cf.entries.max_entry() > M * (1 + 1e-12))
    throw PreconditionViolated("bounded scaling: closure exceeds the bound M");

  // Multiplicative image of the additive bump: absent/low entries raised to 1/M.
  Eigen::MatrixXd g = f.matrix().cwiseMax(1.0 / M);
  const ProductClosure cg = mult_walk_supremum(NonnegMatrix(std::move(g)));
  if (cg.divergent())
    throw PreconditionViolated("bounded scaling: bumped closure diverges");

  // Every bumped edge into the basepoint is at least 1/M, so column 0 is
  // positive and the into-basepoint orientation always applies.
  ScalingVector sv = scaling_from_basepoint(cg.entries, 0);
  sv.bound = M;
  return sv;
}

bool is_compressed(const NonnegMatrix& f, double tol) {
  const Index n = f.size();
  for (Index x = 0; x < n; ++x)
    for (Index y = 0; y < n; ++y) {
      const double fxy = f(x, y);
      for (Index z = 0; z < n; ++z)
        if (fxy * f(y, z) > f(x, z) + tol) return false;
    }
  return true;
}

}  // namespace semiscale
