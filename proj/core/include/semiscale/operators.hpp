#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "semiscale/errors.hpp"

namespace semiscale {

/// Classified view of a finite set of square real matrices: self-adjointness
/// of the whole set, the positive semidefinite members, and the projections.
/// Invariant: projections is a subset of positive_part.
struct OperatorSet {
  std::vector<Eigen::MatrixXd> elements;
  bool self_adjoint_closed = false;
  std::vector<std::size_t> positive_part;
  std::vector<std::size_t> projections;
  double tol = 1e-10;

  Index dim() const { return elements.empty() ? 0 : static_cast<Index>(elements.front().rows()); }
};

/// PSD is decided by a symmetry check plus min eigenvalue >= -tol * max-abs;
/// projections by ||P^2 - P|| and ||P - P^T|| (Frobenius) within tol.
OperatorSet classify(std::vector<Eigen::MatrixXd> elements, double tol = 1e-10);

/// Frobenius residual ||(SS^T)^2 - SS^T||; zero exactly when SS^T projects.
double check_ss_star_projection(const Eigen::MatrixXd& S);

struct PartialIsometryReport {
  bool is_partial_isometry = false;
  double ss_star_residual = 0.0;
  double operator_norm = 0.0;   // largest singular value
  double norm_distance = 0.0;   // |operator_norm - 1|, 0 for the zero matrix
  bool nonzero = false;
};

/// A matrix is a partial isometry when SS^T is a projection; nonzero partial
/// isometries have operator norm 1 (the zero matrix passes vacuously).
PartialIsometryReport check_partial_isometry(const Eigen::MatrixXd& S, double tol = 1e-10);

/// Max over projection pairs of ||PQ - QP||_F (0 with fewer than two).
double check_projections_commute(const OperatorSet& opset);

struct RankBoundReport {
  bool ok = false;
  double max_trace_positive = 0.0;  // r = max trace over the PSD part
  std::vector<int> ranks;           // numerical rank per element
};

/// Numerical rank (singular values above tol * sigma_max) of every element
/// must not exceed round(r). Throws EmptyPositivePart when no element is PSD.
RankBoundReport check_rank_bound(const OperatorSet& opset, double tol = 1e-10);

/// Block structure of a nonnegative projection (or partial isometry): each
/// block is rank one with unit generating vectors, strictly positive on its
/// support. For projections rows == cols and left == right.
struct BlockDecomposition {
  struct Block {
    std::vector<Index> rows;
    std::vector<Index> cols;
    Eigen::VectorXd left;   // unit vector on `rows`
    Eigen::VectorXd right;  // coefficient vector on `cols`
  };
  std::vector<Block> blocks;
  std::vector<Index> zero_rows;
  std::vector<Index> zero_cols;
};

/// Connected components of the support graph of an entrywise-nonnegative
/// projection are rank-one blocks x_k x_k^T with unit strictly positive x_k;
/// verifies P_ij^2 = P_ii P_jj on every support edge. Throws NotAProjection
/// or BlockNotRankOne.
BlockDecomposition decompose_nonneg_projection(const Eigen::MatrixXd& P, double tol = 1e-10);

/// Max relative residual of S_ij^2 = (SS^T)_ii (S^T S)_jj over entries
/// S_ij > tol. Requires S >= 0 with SS^T and S^T S both projections.
double check_sqrt_xi_eta(const Eigen::MatrixXd& S, double tol = 1e-10);

/// Rectangular block structure of a nonnegative partial isometry: connected
/// components of the bipartite support graph are rank-one blocks u_k v_k^T
/// with (u_k^T u_k)(v_k^T v_k) = 1.
BlockDecomposition decompose_partial_isometry(const Eigen::MatrixXd& S, double tol = 1e-10);

/// Distinct trace values over the whole set and over its PSD part, clustered
/// so that reported representatives differ by more than cluster_tol.
struct TraceRangeReport {
  std::vector<double> traces_all;
  std::vector<double> traces_positive;
};

TraceRangeReport trace_range_report(const OperatorSet& opset, double cluster_tol = 1e-8);

/// Per-index clustered diagonal value sets {S_ii : S PSD}; their cardinality
/// is the finite-diagonal hypothesis checked on instances.
std::vector<std::vector<double>> diagonal_families(const OperatorSet& opset,
                                                   double cluster_tol = 1e-8);

/// Aggregated verdicts for a matrix set: partial-isometry reports, idempotent
/// symmetry residuals, commutativity, trace range, and the rank bound.
struct OperatorReport {
  OperatorSet opset;
  std::vector<PartialIsometryReport> isometry;
  /// ||E - E^T||_F for elements with ||E^2 - E||_F <= tol, else nullopt.
  std::vector<std::optional<double>> idempotent_symmetry;
  double projection_commutativity_residual = 0.0;
  std::optional<RankBoundReport> rank_bound;  // nullopt when the PSD part is empty
  TraceRangeReport trace_range;
  std::vector<std::vector<double>> diagonal_family_sizes;
};

OperatorReport operator_report(std::vector<Eigen::MatrixXd> elements, double tol = 1e-10,
                               double cluster_tol = 1e-8);

}  // namespace semiscale
