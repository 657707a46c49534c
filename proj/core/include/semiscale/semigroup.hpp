#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "semiscale/errors.hpp"
#include "semiscale/nonneg_matrix.hpp"
#include "semiscale/scaling.hpp"

namespace semiscale {

/// Composition used to multiply semigroup elements: the ordinary matrix
/// product, or the atom-weighted product (f*g)(x,y) = sum_z f(x,z) w(z) g(z,y)
/// induced by an atomic measure whose atoms all weigh at least 1.
class CompositionRule {
 public:
  enum class Kind { standard, atom_weighted };

  static CompositionRule standard() { return CompositionRule(Kind::standard, {}); }

  /// Validates w(y) >= 1 for every atom.
  static CompositionRule atom_weighted(Eigen::VectorXd w);

  /// Skips the w >= 1 validation; for probing how the matrix-like inequality
  /// fails under an inadmissible measure. Not a semigroup composition.
  static CompositionRule atom_weighted_unchecked(Eigen::VectorXd w) {
    return CompositionRule(Kind::atom_weighted, std::move(w));
  }

  Kind kind() const { return kind_; }
  const Eigen::VectorXd& atom_weights() const { return weights_; }

  /// Raw product under the rule; no nonnegativity/finiteness re-validation.
  Eigen::MatrixXd apply_raw(const NonnegMatrix& f, const NonnegMatrix& g) const;
  NonnegMatrix apply(const NonnegMatrix& f, const NonnegMatrix& g) const;

 private:
  CompositionRule(Kind k, Eigen::VectorXd w) : kind_(k), weights_(std::move(w)) {}
  Kind kind_;
  Eigen::VectorXd weights_;
};

enum class ClosureStatus { complete, capped };

/// Finite enumeration of a finitely generated semigroup, deduplicated by
/// entrywise max-abs distance. `generators` indexes the generator images
/// inside `elements`. Status is `complete` when a product fixpoint was
/// reached, `capped` when enumeration stopped at the element cap (or an
/// entry overflowed the floating range, which certifies unboundedness).
struct SemigroupClosure {
  std::vector<NonnegMatrix> elements;
  std::vector<std::size_t> generators;
  ClosureStatus status = ClosureStatus::complete;
  std::size_t cap = 0;
  CompositionRule composition = CompositionRule::standard();
  double dedup_tol = 1e-9;

  Index dim() const { return elements.empty() ? 0 : elements.front().size(); }
  std::vector<NonnegMatrix> generator_matrices() const;
};

inline constexpr std::size_t kDefaultClosureCap = 10000;
inline constexpr double kDefaultDedupTol = 1e-9;

/// Breadth-first product enumeration in deterministic order: for each element
/// index, for each generator index, the left product then the right product.
SemigroupClosure generate_closure(const std::vector<NonnegMatrix>& generators,
                                  const CompositionRule& rule = CompositionRule::standard(),
                                  std::size_t cap = kDefaultClosureCap,
                                  double dedup_tol = kDefaultDedupTol);

/// True iff (f*g)(x,z) >= f(x,y) g(y,z) - tol for all element pairs and all
/// triples of indices under the rule.
bool matrix_like_check(const std::vector<NonnegMatrix>& elements,
                       const CompositionRule& rule, double tol = 1e-9);

/// True iff the boolean Kleene plus of the OR of generator supports is all
/// ones, i.e. some product is positive at every position.
bool is_indecomposable(const std::vector<NonnegMatrix>& generators);

/// Entrywise supremum over enumerated elements; `exact` iff the closure is
/// complete (a capped enumeration only bounds the true sup from below).
struct SupFunction {
  NonnegMatrix s;
  bool exact = false;
};

SupFunction sup_function(const SemigroupClosure& closure);

enum class VerificationScope { complete_closure, enumerated_prefix };

/// Witness that f(x,y) <= d(x)/d(y) across the (enumerated) semigroup.
/// max_violation is the largest f(x,y) d(y)/d(x) observed; at most 1 + slack
/// when the certificate is valid. `sup_uv` records the entry supremum at the
/// hypothesis pair (u, v); `basepoint` anchors d (d(basepoint) equals the
/// closure diagonal there, so d is reported as constructed, not normalized).
struct DominationCertificate {
  ScalingVector d;
  VerificationScope verified_against = VerificationScope::complete_closure;
  std::size_t element_count = 0;
  double max_violation = 0.0;
  Index basepoint = 0;
  Index u = 0;
  Index v = 0;
  double sup_uv = 0.0;
};

/// Scaling certificate for an indecomposable semigroup: d comes from the
/// multiplicative closure of the sup function, anchored at u when usable
/// (first usable index otherwise). Throws NotIndecomposable or, when the
/// closure of the sup function diverges (capped/unbounded input), Divergent.
DominationCertificate semigroup_scaling(const SemigroupClosure& closure, Index u, Index v);

/// Bounded variant: requires every enumerated entry <= M (M >= 1) and returns
/// a certificate whose d is confined to [1/M, M].
DominationCertificate bounded_semigroup_scaling(const SemigroupClosure& closure, double M);

/// Diagonal similarity: every element f is replaced by
/// f'(x,y) = f(x,y) d(y)/d(x). Preserves diagonals, zero patterns, and the
/// semigroup structure under both composition kinds.
SemigroupClosure rescale_by(const SemigroupClosure& closure, const ScalingVector& d);

struct BinaryRescaleResult {
  ScalingVector d;
  SemigroupClosure rescaled;
};

/// For an indecomposable semigroup whose closure has every diagonal entry in
/// {0, 1} (checked to `binary_tol`), produces d such that every rescaled
/// entry is 0 or 1; positive entries must rescale to exactly 1.
BinaryRescaleResult binary_diagonal_rescale(const std::vector<NonnegMatrix>& generators,
                                            std::size_t cap = kDefaultClosureCap,
                                            double dedup_tol = kDefaultDedupTol,
                                            double binary_tol = 1e-9);

/// Per-pair entry suprema plus the global maximum. For capped closures the
/// table is only a lower bound and is labeled as such.
struct EntrywiseBoundReport {
  SupFunction sup;
  double global_max = 0.0;
  bool lower_bound_only = false;
};

EntrywiseBoundReport entrywise_bound_report(const SemigroupClosure& closure);

}  // namespace semiscale
