#include "semiscale/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace semiscale {

namespace {

double fro(const Eigen::MatrixXd& m) { return m.norm(); }

bool is_projection_matrix(const Eigen::MatrixXd& p, double tol) {
  return fro(p * p - p) <= tol && fro(p - p.transpose()) <= tol;
}

std::vector<double> cluster(std::vector<double> values, double tol) {
  std::sort(values.begin(), values.end());
  std::vector<double> reps;
  for (double v : values) {
    if (reps.empty() || v - reps.back() > tol) reps.push_back(v);
  }
  return reps;
}

// Connected components over an undirected adjacency given as a predicate.
template <class Adj>
std::vector<std::vector<Index>> components(Index n, const std::vector<char>& active,
                                           Adj adjacent) {
  std::vector<std::vector<Index>> comps;
  std::vector<char> seen(n, 0);
  for (Index s = 0; s < n; ++s) {
    if (!active[s] || seen[s]) continue;
    std::vector<Index> comp, stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      const Index v = stack.back();
      stack.pop_back();
      comp.push_back(v);
      for (Index w = 0; w < n; ++w)
        if (active[w] && !seen[w] && adjacent(v, w)) {
          seen[w] = 1;
          stack.push_back(w);
        }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

}  // namespace

OperatorSet classify(std::vector<Eigen::MatrixXd> elements, double tol) {
  OperatorSet set;
  set.tol = tol;
  if (elements.empty()) {
    set.self_adjoint_closed = true;
    return set;
  }
  const Eigen::Index n = elements.front().rows();
  for (const auto& m : elements)
    if (m.rows() != n || m.cols() != n)
      throw DimensionMismatch("operator set must share one square dimension");
  set.elements = std::move(elements);

  set.self_adjoint_closed = true;
  for (const auto& t : set.elements) {
    const Eigen::MatrixXd tt = t.transpose();
    bool found = false;
    for (const auto& u : set.elements)
      if (fro(tt - u) <= tol) {
        found = true;
        break;
      }
    if (!found) {
      set.self_adjoint_closed = false;
      break;
    }
  }

  for (std::size_t i = 0; i < set.elements.size(); ++i) {
    const Eigen::MatrixXd& t = set.elements[i];
    const double scale = t.size() == 0 ? 0.0 : t.cwiseAbs().maxCoeff();
    bool psd = false;
    if (fro(t - t.transpose()) <= tol) {
      const Eigen::MatrixXd sym = 0.5 * (t + t.transpose());
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
      psd = es.eigenvalues().minCoeff() >= -tol * std::max(scale, 1.0);
    }
    if (psd) set.positive_part.push_back(i);
    // Projections are PSD by definition; keeping the subset structural also
    // keeps the verdicts coherent at sloppy tolerances.
    if (psd && is_projection_matrix(t, tol)) set.projections.push_back(i);
  }
  return set;
}

double check_ss_star_projection(const Eigen::MatrixXd& S) {
  const Eigen::MatrixXd p = S * S.transpose();
  return fro(p * p - p);
}

PartialIsometryReport check_partial_isometry(const Eigen::MatrixXd& S, double tol) {
  PartialIsometryReport r;
  r.ss_star_residual = check_ss_star_projection(S);
  r.is_partial_isometry = r.ss_star_residual <= tol;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(S);
  r.operator_norm = S.size() == 0 ? 0.0 : svd.singularValues().maxCoeff();
  r.nonzero = r.operator_norm > tol;
  r.norm_distance = r.nonzero ? std::abs(r.operator_norm - 1.0) : 0.0;
  return r;
}

double check_projections_commute(const OperatorSet& opset) {
  double worst = 0.0;
  for (std::size_t a = 0; a < opset.projections.size(); ++a)
    for (std::size_t b = a + 1; b < opset.projections.size(); ++b) {
      const Eigen::MatrixXd& p = opset.elements[opset.projections[a]];
      const Eigen::MatrixXd& q = opset.elements[opset.projections[b]];
      worst = std::max(worst, fro(p * q - q * p));
    }
  return worst;
}

RankBoundReport check_rank_bound(const OperatorSet& opset, double tol) {
  if (opset.positive_part.empty())
    throw EmptyPositivePart("rank bound needs a nonempty positive semidefinite part");
  RankBoundReport report;
  for (std::size_t i : opset.positive_part)
    report.max_trace_positive =
        std::max(report.max_trace_positive, opset.elements[i].trace());

  const long bound = std::lround(report.max_trace_positive);
  report.ok = true;
  for (const auto& t : opset.elements) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(t);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() == 0 ? 0.0 : sv.maxCoeff();
    int rank = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k)
      if (sv[k] > tol * smax) ++rank;
    report.ranks.push_back(rank);
    if (rank > bound) report.ok = false;
  }
  return report;
}

BlockDecomposition decompose_nonneg_projection(const Eigen::MatrixXd& P, double tol) {
  const Index n = static_cast<Index>(P.rows());
  if (P.rows() != P.cols()) throw DimensionMismatch("projection must be square");
  if (P.size() > 0 && P.minCoeff() < -tol)
    throw PreconditionViolated("projection must be entrywise nonnegative");
  const double proj_residual = fro(P * P - P) + fro(P - P.transpose());
  if (!is_projection_matrix(P, tol))
    throw NotAProjection("matrix is not a projection within tolerance", proj_residual);

  std::vector<char> active(n, 0);
  for (Index i = 0; i < n; ++i) {
    if (P(i, i) > tol) active[i] = 1;
    for (Index j = 0; j < n; ++j)
      if (i != j && P(i, j) > tol) active[i] = 1;
  }

  BlockDecomposition dec;
  for (Index i = 0; i < n; ++i)
    if (!active[i]) {
      dec.zero_rows.push_back(i);
      dec.zero_cols.push_back(i);
    }

  auto adj = [&](Index a, Index b) { return P(a, b) > tol; };
  for (auto& comp : components(n, active, adj)) {
    // The dominant-diagonal column of the block generates it: for a rank-one
    // block x x^T, column j is x * x_j, so normalizing recovers x.
    Index pivot = comp.front();
    for (Index i : comp)
      if (P(i, i) > P(pivot, pivot)) pivot = i;

    Eigen::VectorXd x(static_cast<Eigen::Index>(comp.size()));
    for (std::size_t k = 0; k < comp.size(); ++k) x[static_cast<Eigen::Index>(k)] = P(comp[k], pivot);
    const double norm = x.norm();
    if (norm <= tol)
      throw BlockNotRankOne("support block has a vanishing generating column");
    x /= norm;

    double residual = 0.0;
    for (std::size_t a = 0; a < comp.size(); ++a)
      for (std::size_t b = 0; b < comp.size(); ++b) {
        const double want = x[static_cast<Eigen::Index>(a)] * x[static_cast<Eigen::Index>(b)];
        residual += std::pow(P(comp[a], comp[b]) - want, 2);
        // Entry law on support edges.
        if (P(comp[a], comp[b]) > tol &&
            std::abs(P(comp[a], comp[b]) * P(comp[a], comp[b]) -
                     P(comp[a], comp[a]) * P(comp[b], comp[b])) >
                tol * std::max(1.0, P(comp[a], comp[b])))
          throw BlockNotRankOne("entry law P_ij^2 = P_ii P_jj fails on a support edge");
      }
    if (std::sqrt(residual) > std::max(tol, 10 * tol * static_cast<double>(comp.size())))
      throw BlockNotRankOne("support block is not rank one");
    for (std::size_t k = 0; k < comp.size(); ++k)
      if (!(x[static_cast<Eigen::Index>(k)] > 0.0))
        throw BlockNotRankOne("generating vector is not strictly positive on its block");

    BlockDecomposition::Block block;
    block.rows = comp;
    block.cols = comp;
    block.left = x;
    block.right = x;
    dec.blocks.push_back(std::move(block));
  }
  return dec;
}

double check_sqrt_xi_eta(const Eigen::MatrixXd& S, double tol) {
  if (S.size() > 0 && S.minCoeff() < -tol)
    throw PreconditionViolated("entry law requires an entrywise nonnegative matrix");
  const Eigen::MatrixXd left = S * S.transpose();
  const Eigen::MatrixXd right = S.transpose() * S;
  if (!is_projection_matrix(left, std::max(tol, 1e-9)) ||
      !is_projection_matrix(right, std::max(tol, 1e-9)))
    throw PreconditionViolated("entry law requires SS^T and S^T S to be projections");

  double worst = 0.0;
  const Eigen::Index n = S.rows();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < S.cols(); ++j) {
      const double s = S(i, j);
      if (s <= tol) continue;
      const double res = std::abs(s * s - left(i, i) * right(j, j)) /
                         std::max(s * s, std::numeric_limits<double>::min());
      worst = std::max(worst, res);
    }
  return worst;
}

BlockDecomposition decompose_partial_isometry(const Eigen::MatrixXd& S, double tol) {
  const Index rows = static_cast<Index>(S.rows());
  const Index cols = static_cast<Index>(S.cols());
  if (S.size() > 0 && S.minCoeff() < -tol)
    throw PreconditionViolated("decomposition requires an entrywise nonnegative matrix");
  if (check_ss_star_projection(S) > tol)
    throw PreconditionViolated("SS^T is not a projection within tolerance");

  // Bipartite support graph on rows + cols; vertex v < rows is row v,
  // otherwise column v - rows.
  const Index total = rows + cols;
  std::vector<char> active(total, 0);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j)
      if (S(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) > tol)
        active[i] = active[rows + j] = 1;

  BlockDecomposition dec;
  for (Index i = 0; i < rows; ++i)
    if (!active[i]) dec.zero_rows.push_back(i);
  for (Index j = 0; j < cols; ++j)
    if (!active[rows + j]) dec.zero_cols.push_back(j);

  auto adj = [&](Index a, Index b) {
    if (a < rows && b >= rows) return S(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b - rows)) > tol;
    if (b < rows && a >= rows) return S(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a - rows)) > tol;
    return false;
  };
  for (auto& comp : components(total, active, adj)) {
    BlockDecomposition::Block block;
    for (Index v : comp)
      (v < rows ? block.rows : block.cols).push_back(v < rows ? v : v - rows);
    if (block.rows.empty() || block.cols.empty())
      throw BlockNotRankOne("support block misses a row or column side");

    // Normalize the heaviest column of the block; the block must be u v^T.
    Index pivot = block.cols.front();
    double best = -1.0;
    for (Index j : block.cols) {
      double norm2 = 0.0;
      for (Index i : block.rows) norm2 += S(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * S(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (norm2 > best) {
        best = norm2;
        pivot = j;
      }
    }
    Eigen::VectorXd u(static_cast<Eigen::Index>(block.rows.size()));
    for (std::size_t k = 0; k < block.rows.size(); ++k)
      u[static_cast<Eigen::Index>(k)] = S(static_cast<Eigen::Index>(block.rows[k]), static_cast<Eigen::Index>(pivot));
    const double unorm = u.norm();
    if (unorm <= tol) throw BlockNotRankOne("support block has a vanishing pivot column");
    u /= unorm;

    Eigen::VectorXd v(static_cast<Eigen::Index>(block.cols.size()));
    for (std::size_t k = 0; k < block.cols.size(); ++k) {
      double dot = 0.0;
      for (std::size_t r = 0; r < block.rows.size(); ++r)
        dot += u[static_cast<Eigen::Index>(r)] *
               S(static_cast<Eigen::Index>(block.rows[r]), static_cast<Eigen::Index>(block.cols[k]));
      v[static_cast<Eigen::Index>(k)] = dot;
    }

    double residual = 0.0;
    for (std::size_t r = 0; r < block.rows.size(); ++r)
      for (std::size_t k = 0; k < block.cols.size(); ++k)
        residual += std::pow(S(static_cast<Eigen::Index>(block.rows[r]), static_cast<Eigen::Index>(block.cols[k])) -
                                 u[static_cast<Eigen::Index>(r)] * v[static_cast<Eigen::Index>(k)],
                             2);
    if (std::sqrt(residual) > std::max(tol, 10 * tol * static_cast<double>(comp.size())))
      throw BlockNotRankOne("support block is not rank one");
    // (u^T u)(v^T v) must land on 1 (0 never reaches here: blocks have edges).
    if (std::abs(v.squaredNorm() - 1.0) > std::max(tol, 1e-9))
      throw BlockNotRankOne("block norms (u^T u)(v^T v) are not in {0, 1}");
    for (Eigen::Index k = 0; k < u.size(); ++k)
      if (!(u[k] > 0.0)) throw BlockNotRankOne("left vector not strictly positive");
    for (Eigen::Index k = 0; k < v.size(); ++k)
      if (!(v[k] > 0.0)) throw BlockNotRankOne("right vector not strictly positive");

    block.left = std::move(u);
    block.right = std::move(v);
    dec.blocks.push_back(std::move(block));
  }
  return dec;
}

TraceRangeReport trace_range_report(const OperatorSet& opset, double cluster_tol) {
  TraceRangeReport report;
  std::vector<double> all, pos;
  for (const auto& t : opset.elements) all.push_back(t.trace());
  for (std::size_t i : opset.positive_part) pos.push_back(opset.elements[i].trace());
  report.traces_all = cluster(std::move(all), cluster_tol);
  report.traces_positive = cluster(std::move(pos), cluster_tol);
  return report;
}

std::vector<std::vector<double>> diagonal_families(const OperatorSet& opset,
                                                   double cluster_tol) {
  const Index n = opset.dim();
  std::vector<std::vector<double>> families(n);
  for (Index i = 0; i < n; ++i) {
    std::vector<double> vals;
    for (std::size_t e : opset.positive_part)
      vals.push_back(opset.elements[e](static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)));
    families[i] = cluster(std::move(vals), cluster_tol);
  }
  return families;
}

OperatorReport operator_report(std::vector<Eigen::MatrixXd> elements, double tol,
                               double cluster_tol) {
  OperatorReport report;
  report.opset = classify(std::move(elements), tol);
  for (const auto& t : report.opset.elements) {
    report.isometry.push_back(check_partial_isometry(t, tol));
    if (fro(t * t - t) <= tol)
      report.idempotent_symmetry.emplace_back(fro(t - t.transpose()));
    else
      report.idempotent_symmetry.emplace_back(std::nullopt);
  }
  report.projection_commutativity_residual = check_projections_commute(report.opset);
  if (!report.opset.positive_part.empty())
    report.rank_bound = check_rank_bound(report.opset, tol);
  report.trace_range = trace_range_report(report.opset, cluster_tol);
  report.diagonal_family_sizes = diagonal_families(report.opset, cluster_tol);
  return report;
}

}  // namespace semiscale
