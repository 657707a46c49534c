#pragma once

#include <Eigen/Dense>

#include "semiscale/errors.hpp"

namespace semiscale {

/// Square dense matrix with entries in [0, inf). No NaN or infinity is ever
/// stored; construction validates. These are the semigroup elements f.
class NonnegMatrix {
 public:
  NonnegMatrix() : m_(0, 0) {}
  explicit NonnegMatrix(Eigen::MatrixXd m);

  static NonnegMatrix zero(Index n) { return NonnegMatrix(Eigen::MatrixXd::Zero(n, n)); }
  static NonnegMatrix identity(Index n) {
    return NonnegMatrix(Eigen::MatrixXd::Identity(n, n));
  }
  /// Matrix unit v * E_{ij} (0-based).
  static NonnegMatrix unit(Index n, Index i, Index j, double v = 1.0);

  Index size() const { return static_cast<Index>(m_.rows()); }
  double operator()(Index i, Index j) const {
    return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  const Eigen::MatrixXd& matrix() const { return m_; }

  double max_entry() const { return m_.size() == 0 ? 0.0 : m_.maxCoeff(); }

  friend NonnegMatrix entrywise_max(const NonnegMatrix& a, const NonnegMatrix& b);

  /// Largest entrywise absolute difference; matrices must share dimensions.
  friend double max_abs_diff(const NonnegMatrix& a, const NonnegMatrix& b);

 private:
  Eigen::MatrixXd m_;
};

}  // namespace semiscale
