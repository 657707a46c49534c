#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "semiscale/errors.hpp"

namespace semiscale {

/// Scalar hooks for the truncated-projection rig. The rig is templated on the
/// scalar so the truncation-tail decay can be measured below the double
/// rounding floor; specialize for wider types (see tests for __float128).
template <class Real>
struct RealOps {
  static Real sqrt(Real x) {
    using std::sqrt;
    return sqrt(x);
  }
  static Real abs(Real x) {
    using std::abs;
    return abs(x);
  }
  static Real ldexp(Real x, int e) {
    using std::ldexp;
    return ldexp(x, e);
  }
};

/// Minimal dense square matrix used by the rig (row-major).
template <class Real>
struct DenseMatrix {
  std::size_t n = 0;
  std::vector<Real> a;

  explicit DenseMatrix(std::size_t size = 0) : n(size), a(size * size, Real(0)) {}
  Real& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
  const Real& operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

template <class Real>
DenseMatrix<Real> matmul(const DenseMatrix<Real>& x, const DenseMatrix<Real>& y) {
  DenseMatrix<Real> r(x.n);
  for (std::size_t i = 0; i < x.n; ++i)
    for (std::size_t k = 0; k < x.n; ++k) {
      const Real xik = x(i, k);
      if (xik == Real(0)) continue;
      for (std::size_t j = 0; j < x.n; ++j) r(i, j) += xik * y(k, j);
    }
  return r;
}

template <class Real>
Real frobenius_diff(const DenseMatrix<Real>& x, const DenseMatrix<Real>& y) {
  Real s(0);
  for (std::size_t k = 0; k < x.a.size(); ++k) {
    const Real d = x.a[k] - y.a[k];
    s += d * d;
  }
  return RealOps<Real>::sqrt(s);
}

/// The truncated instance: f has coordinates c^i with c = 1/sqrt(2); g_m
/// keeps coordinate i exactly when floor((i-1)/2^m) is even (alternating
/// segments of length 2^m, first kept), h_m = f - g_m. P = f f^T is the
/// rank-one projection; Q_m = g g^T/||g||^2 + h h^T/||h||^2 has rank two.
/// Norms are cached from the truncated sums.
template <class Real>
struct ExampleInstance {
  std::size_t N = 0;
  int m_max = 0;
  std::vector<Real> f;
  std::vector<std::vector<Real>> g, h;  // index m-1
  std::vector<Real> g_norm2, h_norm2;
  Real f_norm2 = Real(0);
  DenseMatrix<Real> P;
  std::vector<DenseMatrix<Real>> Q;
};

/// Coordinate c^i = 2^{-i/2}, split into an exact power of two and at most
/// one rounded factor sqrt(1/2), so no error accumulates along the sequence.
template <class Real>
Real example_coordinate(std::size_t i) {
  const Real inv_sqrt2 = RealOps<Real>::sqrt(Real(0.5));
  if (i % 2 == 0) return RealOps<Real>::ldexp(Real(1), -static_cast<int>(i / 2));
  return RealOps<Real>::ldexp(inv_sqrt2, -static_cast<int>((i - 1) / 2));
}

template <class Real>
ExampleInstance<Real> build_instance(std::size_t N, int m_max) {
  if (m_max < 1) throw TruncationTooShort("segment exponent must be at least 1");
  if (m_max >= 60 || N < (std::size_t{1} << (m_max + 1)))
    throw TruncationTooShort("truncation length " + std::to_string(N) +
                             " is below 2^(m_max+1); need at least two segments");
  ExampleInstance<Real> inst;
  inst.N = N;
  inst.m_max = m_max;
  inst.f.resize(N);
  for (std::size_t i = 1; i <= N; ++i) inst.f[i - 1] = example_coordinate<Real>(i);

  // Sum the geometric tails smallest-first.
  auto norm2 = [](const std::vector<Real>& v) {
    Real s(0);
    for (std::size_t k = v.size(); k-- > 0;) s += v[k] * v[k];
    return s;
  };
  inst.f_norm2 = norm2(inst.f);

  for (int m = 1; m <= m_max; ++m) {
    const std::size_t seg = std::size_t{1} << m;
    std::vector<Real> gm(N, Real(0)), hm(N, Real(0));
    for (std::size_t i = 1; i <= N; ++i) {
      if (((i - 1) / seg) % 2 == 0)
        gm[i - 1] = inst.f[i - 1];
      else
        hm[i - 1] = inst.f[i - 1];
    }
    inst.g_norm2.push_back(norm2(gm));
    inst.h_norm2.push_back(norm2(hm));
    inst.g.push_back(std::move(gm));
    inst.h.push_back(std::move(hm));
  }

  auto add_outer = [](DenseMatrix<Real>& target, const std::vector<Real>& v, Real scale) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] == Real(0)) continue;
      const Real vi = v[i] * scale;
      for (std::size_t j = 0; j < v.size(); ++j) target(i, j) += vi * v[j];
    }
  };

  inst.P = DenseMatrix<Real>(N);
  add_outer(inst.P, inst.f, Real(1));
  for (int m = 1; m <= m_max; ++m) {
    DenseMatrix<Real> q(N);
    add_outer(q, inst.g[m - 1], Real(1) / inst.g_norm2[m - 1]);
    add_outer(q, inst.h[m - 1], Real(1) / inst.h_norm2[m - 1]);
    inst.Q.push_back(std::move(q));
  }
  return inst;
}

/// Closed form 2^{-2^m} for c^{2^{m+1}} with c^2 = 1/2 (exact in binary FP).
template <class Real>
Real segment_ratio(int m) {
  return RealOps<Real>::ldexp(Real(1), -(1 << m));
}

template <class Real>
struct NormResiduals {
  std::vector<Real> g_residual, h_residual;  // truncated sum vs closed form
  Real max_residual = Real(0);
};

/// ||g_m||^2 = (c^{2^{m+1}} + 1)^{-1} and ||h_m||^2 = c^{2^{m+1}} ||g_m||^2;
/// the truncated sums reach these up to the tail mass 2^{-N}.
template <class Real>
NormResiduals<Real> verify_norms(const ExampleInstance<Real>& inst) {
  NormResiduals<Real> out;
  for (int m = 1; m <= inst.m_max; ++m) {
    const Real q = segment_ratio<Real>(m);
    const Real g_closed = Real(1) / (q + Real(1));
    const Real h_closed = q / (q + Real(1));
    const Real gr = RealOps<Real>::abs(inst.g_norm2[m - 1] - g_closed);
    const Real hr = RealOps<Real>::abs(inst.h_norm2[m - 1] - h_closed);
    out.g_residual.push_back(gr);
    out.h_residual.push_back(hr);
    out.max_residual = std::max({out.max_residual, gr, hr});
  }
  return out;
}

template <class Real>
struct InnerProductResiduals {
  Real f_g, f_h;      // f.g_m = ||g_m||^2, f.h_m = ||h_m||^2
  Real g_g, g_h;      // g_m.g_n = ||g_m||^2 ||g_n||^2, g_m.h_n = ||g_m||^2 ||h_n||^2
  Real h_g, h_h;      // h_m.g_n = ||h_m||^2 ||g_n||^2, h_m.h_n = ||h_m||^2 ||h_n||^2
  Real max_residual;
};

/// Checks the six inner-product identities for m < n <= m_max.
template <class Real>
InnerProductResiduals<Real> verify_inner_products(const ExampleInstance<Real>& inst,
                                                  int m, int n) {
  if (!(1 <= m && m < n && n <= inst.m_max))
    throw PreconditionViolated("inner-product identities need 1 <= m < n <= m_max");
  auto dot = [](const std::vector<Real>& a, const std::vector<Real>& b) {
    Real s(0);
    for (std::size_t k = a.size(); k-- > 0;) s += a[k] * b[k];
    return s;
  };
  const auto& gm = inst.g[m - 1];
  const auto& hm = inst.h[m - 1];
  const auto& gn = inst.g[n - 1];
  const auto& hn = inst.h[n - 1];
  const Real gm2 = inst.g_norm2[m - 1], hm2 = inst.h_norm2[m - 1];
  const Real gn2 = inst.g_norm2[n - 1], hn2 = inst.h_norm2[n - 1];

  InnerProductResiduals<Real> r{};
  r.f_g = RealOps<Real>::abs(dot(inst.f, gm) - gm2);
  r.f_h = RealOps<Real>::abs(dot(inst.f, hm) - hm2);
  r.g_g = RealOps<Real>::abs(dot(gm, gn) - gm2 * gn2);
  r.g_h = RealOps<Real>::abs(dot(gm, hn) - gm2 * hn2);
  r.h_g = RealOps<Real>::abs(dot(hm, gn) - hm2 * gn2);
  r.h_h = RealOps<Real>::abs(dot(hm, hn) - hm2 * hn2);
  r.max_residual = std::max({r.f_g, r.f_h, r.g_g, r.g_h, r.h_g, r.h_h});
  return r;
}

template <class Real>
struct SemigroupResiduals {
  std::vector<std::pair<std::string, Real>> residuals;
  Real max_residual = Real(0);
};

/// Frobenius residuals of every product identity from the instance:
/// P^2 = P, Q_m^2 = Q_m, P Q_m = Q_m P = P, and Q_m Q_n = Q_n Q_m = P
/// for m < n. Dense products at the truncation.
template <class Real>
SemigroupResiduals<Real> verify_semigroup(const ExampleInstance<Real>& inst) {
  SemigroupResiduals<Real> out;
  auto record = [&](std::string label, Real value) {
    out.max_residual = std::max(out.max_residual, value);
    out.residuals.emplace_back(std::move(label), value);
  };
  record("P*P-P", frobenius_diff(matmul(inst.P, inst.P), inst.P));
  for (int m = 1; m <= inst.m_max; ++m) {
    const auto& q = inst.Q[m - 1];
    const std::string qm = "Q" + std::to_string(m);
    record(qm + "*" + qm + "-" + qm, frobenius_diff(matmul(q, q), q));
    record("P*" + qm + "-P", frobenius_diff(matmul(inst.P, q), inst.P));
    record(qm + "*P-P", frobenius_diff(matmul(q, inst.P), inst.P));
  }
  for (int m = 1; m <= inst.m_max; ++m)
    for (int n = m + 1; n <= inst.m_max; ++n) {
      const auto& qm = inst.Q[m - 1];
      const auto& qn = inst.Q[n - 1];
      const std::string lm = "Q" + std::to_string(m), ln = "Q" + std::to_string(n);
      record(lm + "*" + ln + "-P", frobenius_diff(matmul(qm, qn), inst.P));
      record(ln + "*" + lm + "-P", frobenius_diff(matmul(qn, qm), inst.P));
    }
  return out;
}

template <class Real>
struct DiagonalFamily {
  std::vector<Real> values;     // (1,1) entries: P first, then Q_1..Q_m
  std::vector<Real> residuals;  // against the closed forms
  Real max_residual = Real(0);
  bool pairwise_distinct = false;
  bool strictly_decreasing = false;  // in m, toward c^2
};

/// First diagonal slot family: P_11 = c^2 and (Q_m)_11 = c^2 (c^{2^{m+1}}+1),
/// strictly decreasing in m and all above c^2, so the family never repeats.
template <class Real>
DiagonalFamily<Real> diagonal_family_F1(const ExampleInstance<Real>& inst) {
  DiagonalFamily<Real> fam;
  fam.values.push_back(inst.P(0, 0));
  fam.residuals.push_back(RealOps<Real>::abs(inst.P(0, 0) - Real(0.5)));
  for (int m = 1; m <= inst.m_max; ++m) {
    const Real closed = Real(0.5) * (segment_ratio<Real>(m) + Real(1));
    fam.values.push_back(inst.Q[m - 1](0, 0));
    fam.residuals.push_back(RealOps<Real>::abs(inst.Q[m - 1](0, 0) - closed));
  }
  for (const Real& r : fam.residuals) fam.max_residual = std::max(fam.max_residual, r);

  fam.pairwise_distinct = true;
  for (std::size_t a = 0; a < fam.values.size(); ++a)
    for (std::size_t b = a + 1; b < fam.values.size(); ++b)
      if (fam.values[a] == fam.values[b]) fam.pairwise_distinct = false;
  fam.strictly_decreasing = true;
  for (std::size_t m = 1; m < fam.values.size(); ++m) {
    if (!(fam.values[m] > fam.values[0])) fam.strictly_decreasing = false;
    if (m >= 2 && !(fam.values[m] < fam.values[m - 1])) fam.strictly_decreasing = false;
  }
  return fam;
}

/// Residual budget at truncation N: rounding floor plus the tail allowance.
inline double example_tolerance(std::size_t N) {
  return std::max(1e-12, std::ldexp(1.0, -static_cast<int>(N) / 2 + 8));
}

}  // namespace semiscale
