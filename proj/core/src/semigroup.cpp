#include "semiscale/semigroup.hpp"

#include <cmath>
#include <string>
#include <unordered_map>
#include <utility>

namespace semiscale {

CompositionRule CompositionRule::atom_weighted(Eigen::VectorXd w) {
  for (Eigen::Index i = 0; i < w.size(); ++i)
    if (!(w[i] >= 1.0))
      throw PreconditionViolated("atom weight " + std::to_string(i + 1) +
                                 " = " + std::to_string(w[i]) + " is below 1");
  return CompositionRule(Kind::atom_weighted, std::move(w));
}

Eigen::MatrixXd CompositionRule::apply_raw(const NonnegMatrix& f,
                                           const NonnegMatrix& g) const {
  if (f.size() != g.size()) throw DimensionMismatch("composition: size mismatch");
  if (kind_ == Kind::standard) return f.matrix() * g.matrix();
  if (static_cast<Index>(weights_.size()) != f.size())
    throw DimensionMismatch("composition: atom weight vector has wrong length");
  return f.matrix() * weights_.asDiagonal() * g.matrix();
}

NonnegMatrix CompositionRule::apply(const NonnegMatrix& f, const NonnegMatrix& g) const {
  return NonnegMatrix(apply_raw(f, g));
}

std::vector<NonnegMatrix> SemigroupClosure::generator_matrices() const {
  std::vector<NonnegMatrix> out;
  out.reserve(generators.size());
  for (std::size_t idx : generators) out.push_back(elements[idx]);
  return out;
}

namespace {

// Dedup index over enumerated elements. Elements hash to a scalar digest
// (entry sum with fixed per-position weights in [0.5, 1.5) to spread
// binary-valued matrices); the digest is 1-Lipschitz per entry up to the
// weight bound, so any matrix within dedup_tol of a stored one lands in the
// same or an adjacent bucket. Lookup probes three buckets and compares
// entrywise, which keeps dedup O(1) amortized without missing near-duplicates.
class DedupIndex {
 public:
  DedupIndex(Index dim, double tol)
      : tol_(tol), weights_(dim * dim) {
    for (std::size_t k = 0; k < weights_.size(); ++k) {
      double frac = std::fmod(0.6180339887498949 * static_cast<double>(k + 1), 1.0);
      weights_[k] = 0.5 + frac;
    }
    cell_ = 1.5 * static_cast<double>(weights_.size()) * tol_;
    if (cell_ < 1e-12) cell_ = 1e-12;
  }

  double digest(const NonnegMatrix& m) const {
    const Index n = m.size();
    double s = 0.0;
    std::size_t k = 0;
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) s += m(i, j) * weights_[k++];
    return s;
  }

  // Index of a stored element within tol of m, or npos.
  std::size_t find(const NonnegMatrix& m, const std::vector<NonnegMatrix>& elements) const {
    const long long b = bucket_of(digest(m));
    for (long long probe = b - 1; probe <= b + 1; ++probe) {
      auto it = buckets_.find(probe);
      if (it == buckets_.end()) continue;
      for (std::size_t idx : it->second)
        if (max_abs_diff(elements[idx], m) <= tol_) return idx;
    }
    return npos;
  }

  void insert(const NonnegMatrix& m, std::size_t idx) {
    buckets_[bucket_of(digest(m))].push_back(idx);
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  long long bucket_of(double digest) const {
    // Entries can legitimately approach the floating range during unbounded
    // growth; clamp so the cast below stays defined. Clamped digests share a
    // bucket and fall back to pairwise comparison.
    const double cells = std::floor(digest / cell_);
    constexpr double kLimit = 9.0e17;
    if (cells > kLimit) return static_cast<long long>(kLimit);
    if (cells < -kLimit) return static_cast<long long>(-kLimit);
    return static_cast<long long>(cells);
  }

  double tol_;
  double cell_ = 1e-12;
  std::vector<double> weights_;
  std::unordered_map<long long, std::vector<std::size_t>> buckets_;
};

bool finite_entries(const Eigen::MatrixXd& m) {
  return m.allFinite();
}

}  // namespace

SemigroupClosure generate_closure(const std::vector<NonnegMatrix>& generators,
                                  const CompositionRule& rule, std::size_t cap,
                                  double dedup_tol) {
  if (generators.empty())
    throw PreconditionViolated("closure generation needs at least one generator");
  const Index n = generators.front().size();
  for (const auto& g : generators)
    if (g.size() != n) throw DimensionMismatch("generators must share one dimension");
  if (cap < generators.size())
    throw PreconditionViolated("cap must admit at least the generators");

  SemigroupClosure closure;
  closure.cap = cap;
  closure.composition = rule;
  closure.dedup_tol = dedup_tol;

  DedupIndex index(n, dedup_tol);
  bool refused = false;

  auto try_insert = [&](const Eigen::MatrixXd& raw) {
    if (!finite_entries(raw)) {
      // Floating overflow in a product certifies unbounded entry growth; the
      // enumeration cannot represent the element, so the closure is capped.
      refused = true;
      return DedupIndex::npos;
    }
    NonnegMatrix m(raw);
    std::size_t found = index.find(m, closure.elements);
    if (found != DedupIndex::npos) return found;
    if (closure.elements.size() >= cap) {
      refused = true;
      return DedupIndex::npos;
    }
    const std::size_t idx = closure.elements.size();
    closure.elements.push_back(std::move(m));
    index.insert(closure.elements.back(), idx);
    return idx;
  };

  for (const auto& g : generators) {
    const std::size_t idx = try_insert(g.matrix());
    if (idx == DedupIndex::npos)
      throw PreconditionViolated("generator rejected during closure seeding");
    closure.generators.push_back(idx);
  }

  const std::vector<NonnegMatrix> gens = closure.generator_matrices();
  for (std::size_t i = 0; i < closure.elements.size(); ++i) {
    for (const auto& g : gens) {
      try_insert(rule.apply_raw(g, closure.elements[i]));
      try_insert(rule.apply_raw(closure.elements[i], g));
    }
  }

  closure.status = refused ? ClosureStatus::capped : ClosureStatus::complete;
  return closure;
}

bool matrix_like_check(const std::vector<NonnegMatrix>& elements,
                       const CompositionRule& rule, double tol) {
  for (const auto& f : elements)
    for (const auto& g : elements) {
      const Eigen::MatrixXd prod = rule.apply_raw(f, g);
      const Index n = f.size();
      for (Index x = 0; x < n; ++x)
        for (Index y = 0; y < n; ++y) {
          const double fxy = f(x, y);
          for (Index z = 0; z < n; ++z)
            if (prod(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(z)) <
                fxy * g(y, z) - tol)
              return false;
        }
    }
  return true;
}

bool is_indecomposable(const std::vector<NonnegMatrix>& generators) {
  if (generators.empty()) return false;
  const Index n = generators.front().size();
  std::vector<char> r(n * n, 0);
  for (const auto& g : generators) {
    if (g.size() != n) throw DimensionMismatch("generators must share one dimension");
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        if (g(i, j) > 0.0) r[i * n + j] = 1;
  }
  // Boolean Kleene plus: distributivity of the boolean product over OR makes
  // this the union of supports of all nonempty generator products.
  for (Index k = 0; k < n; ++k)
    for (Index i = 0; i < n; ++i) {
      if (!r[i * n + k]) continue;
      for (Index j = 0; j < n; ++j)
        if (r[k * n + j]) r[i * n + j] = 1;
    }
  for (char c : r)
    if (!c) return false;
  return true;
}

SupFunction sup_function(const SemigroupClosure& closure) {
  if (closure.elements.empty())
    throw PreconditionViolated("sup function of an empty closure");
  NonnegMatrix s = closure.elements.front();
  for (std::size_t i = 1; i < closure.elements.size(); ++i)
    s = entrywise_max(s, closure.elements[i]);
  return SupFunction{std::move(s), closure.status == ClosureStatus::complete};
}

namespace {

double domination_violation(const SemigroupClosure& closure, const ScalingVector& d) {
  double worst = 0.0;
  const Index n = closure.dim();
  for (const auto& f : closure.elements)
    for (Index x = 0; x < n; ++x)
      for (Index y = 0; y < n; ++y) {
        const double v = f(x, y) * d.d[static_cast<Eigen::Index>(y)] /
                         d.d[static_cast<Eigen::Index>(x)];
        if (v > worst) worst = v;
      }
  return worst;
}

DominationCertificate make_certificate(const SemigroupClosure& closure, ScalingVector d,
                                       Index basepoint, Index u, Index v) {
  DominationCertificate cert;
  cert.max_violation = domination_violation(closure, d);
  cert.d = std::move(d);
  cert.verified_against = closure.status == ClosureStatus::complete
                              ? VerificationScope::complete_closure
                              : VerificationScope::enumerated_prefix;
  cert.element_count = closure.elements.size();
  cert.basepoint = basepoint;
  cert.u = u;
  cert.v = v;
  const SupFunction s = sup_function(closure);
  cert.sup_uv = s.s(u, v);
  return cert;
}

}  // namespace

DominationCertificate semigroup_scaling(const SemigroupClosure& closure, Index u, Index v) {
  if (closure.elements.empty())
    throw PreconditionViolated("scaling certificate of an empty closure");
  const Index n = closure.dim();
  if (u >= n || v >= n) throw DimensionMismatch("hypothesis pair out of range");
  if (!is_indecomposable(closure.generator_matrices()))
    throw NotIndecomposable("generator supports do not connect every index pair");

  const SupFunction s = sup_function(closure);
  const ProductClosure cs = mult_walk_supremum(s.s);
  if (cs.divergent())
    throw DivergentError(
        "closure of the sup function diverges (capped or unbounded semigroup)",
        cs.divergent_pairs);

  Index basepoint = u;
  ScalingVector d = [&] {
    try {
      return scaling_from_basepoint(cs.entries, u);
    } catch (const BasepointUnusable&) {
      // Complete indecomposable closures always admit u; a capped enumeration
      // may leave zeros, so fall back to the first usable index.
      for (Index x0 = 0; x0 < n; ++x0) {
        try {
          ScalingVector sv = scaling_from_basepoint(cs.entries, x0);
          basepoint = x0;
          return sv;
        } catch (const BasepointUnusable&) {
        }
      }
      throw;
    }
  }();

  return make_certificate(closure, std::move(d), basepoint, u, v);
}

DominationCertificate bounded_semigroup_scaling(const SemigroupClosure& closure, double M) {
  if (closure.elements.empty())
    throw PreconditionViolated("scaling certificate of an empty closure");
  const SupFunction s = sup_function(closure);
  if (s.s.max_entry() > M)
    throw PreconditionViolated("an enumerated entry exceeds the bound M");
  ScalingVector d = bounded_scaling(s.s, M);
  return make_certificate(closure, std::move(d), 0, 0, 0);
}

SemigroupClosure rescale_by(const SemigroupClosure& closure, const ScalingVector& d) {
  const Index n = closure.dim();
  if (d.size() != n) throw DimensionMismatch("scaling vector length mismatch");
  for (Index i = 0; i < n; ++i)
    if (!(d.d[static_cast<Eigen::Index>(i)] > 0.0))
      throw PreconditionViolated("scaling vector must be strictly positive");

  SemigroupClosure out = closure;
  out.elements.clear();
  out.elements.reserve(closure.elements.size());
  for (const auto& f : closure.elements) {
    Eigen::MatrixXd m = f.matrix();
    for (Index x = 0; x < n; ++x)
      for (Index y = 0; y < n; ++y)
        m(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) *=
            d.d[static_cast<Eigen::Index>(y)] / d.d[static_cast<Eigen::Index>(x)];
    out.elements.emplace_back(std::move(m));
  }
  return out;
}

namespace {

void check_binary_diagonals(const std::vector<NonnegMatrix>& elements, double binary_tol,
                            const char* what) {
  for (std::size_t e = 0; e < elements.size(); ++e) {
    const Index n = elements[e].size();
    for (Index i = 0; i < n; ++i) {
      const double v = elements[e](i, i);
      if (std::abs(v) > binary_tol && std::abs(v - 1.0) > binary_tol)
        throw NotBinaryDiagonal(std::string(what) + " " + std::to_string(e + 1) +
                                    " has diagonal entry (" + std::to_string(i + 1) + "," +
                                    std::to_string(i + 1) + ") = " + std::to_string(v) +
                                    " outside {0, 1}",
                                e, i, i, v);
    }
  }
}

}  // namespace

BinaryRescaleResult binary_diagonal_rescale(const std::vector<NonnegMatrix>& generators,
                                            std::size_t cap, double dedup_tol,
                                            double binary_tol) {
  // Generators are themselves semigroup elements, so their diagonals give the
  // cheapest witness; check them before anything else.
  check_binary_diagonals(generators, binary_tol, "generator");
  if (!is_indecomposable(generators))
    throw NotIndecomposable("generator supports do not connect every index pair");

  const SemigroupClosure closure =
      generate_closure(generators, CompositionRule::standard(), cap, dedup_tol);
  const Index n = closure.dim();
  check_binary_diagonals(closure.elements, binary_tol, "closure element");
  if (closure.status == ClosureStatus::capped)
    throw PreconditionViolated(
        "closure did not complete below the cap; a binary-diagonal "
        "indecomposable semigroup closes finitely, so the hypothesis is suspect");

  DominationCertificate cert = semigroup_scaling(closure, 0, 0);
  SemigroupClosure rescaled = rescale_by(closure, cert.d);

  for (std::size_t e = 0; e < rescaled.elements.size(); ++e)
    for (Index x = 0; x < n; ++x)
      for (Index y = 0; y < n; ++y) {
        const double v = rescaled.elements[e](x, y);
        const bool near_zero = std::abs(v) <= binary_tol;
        const bool near_one = std::abs(v - 1.0) <= binary_tol;
        // A positive original entry must land exactly on 1.
        const bool positive_src = closure.elements[e](x, y) > binary_tol;
        if ((positive_src && !near_one) || (!near_zero && !near_one))
          throw NotBinaryDiagonal("rescaled element " + std::to_string(e + 1) +
                                      " entry (" + std::to_string(x + 1) + "," +
                                      std::to_string(y + 1) + ") = " + std::to_string(v) +
                                      " is not binary",
                                  e, x, y, v);
      }

  return BinaryRescaleResult{std::move(cert.d), std::move(rescaled)};
}

EntrywiseBoundReport entrywise_bound_report(const SemigroupClosure& closure) {
  EntrywiseBoundReport report;
  report.sup = sup_function(closure);
  report.global_max = report.sup.s.max_entry();
  report.lower_bound_only = closure.status == ClosureStatus::capped;
  return report;
}

}  // namespace semiscale
