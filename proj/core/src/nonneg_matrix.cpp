#include "semiscale/nonneg_matrix.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace semiscale {

NonnegMatrix::NonnegMatrix(Eigen::MatrixXd m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols())
    throw DimensionMismatch("nonnegative matrix must be square");
  for (Eigen::Index i = 0; i < m_.rows(); ++i)
    for (Eigen::Index j = 0; j < m_.cols(); ++j) {
      const double v = m_(i, j);
      if (!std::isfinite(v) || v < 0.0)
        throw std::invalid_argument("nonnegative matrix entry (" +
                                    std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                    ") = " + std::to_string(v) + " is invalid");
    }
}

NonnegMatrix NonnegMatrix::unit(Index n, Index i, Index j, double v) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                            static_cast<Eigen::Index>(n));
  m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
  return NonnegMatrix(std::move(m));
}

NonnegMatrix entrywise_max(const NonnegMatrix& a, const NonnegMatrix& b) {
  if (a.size() != b.size()) throw DimensionMismatch("entrywise_max: size mismatch");
  return NonnegMatrix(a.m_.cwiseMax(b.m_));
}

double max_abs_diff(const NonnegMatrix& a, const NonnegMatrix& b) {
  if (a.size() != b.size()) throw DimensionMismatch("max_abs_diff: size mismatch");
  if (a.size() == 0) return 0.0;
  return (a.m_ - b.m_).cwiseAbs().maxCoeff();
}

}  // namespace semiscale
