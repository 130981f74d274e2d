#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <utility>
#include <vector>

#include "qdiv/errors.hpp"
#include "qdiv/tolerances.hpp"

namespace qdiv {

using Index = Eigen::Index;

template <typename Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using RMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using cplx = std::complex<double>;
using ComplexMatrix = CMatrix<double>;
using ComplexVector = CVector<double>;
using RealMatrix = RMatrix<double>;
using RealVector = RVector<double>;

// Complex Hermitian matrix. The constructor rejects inputs whose Hermiticity
// defect exceeds 1e-12 of the largest entry and then stores the exact
// Hermitian part, so downstream code never sees asymmetric roundoff.
template <typename Real>
class Hermitian {
 public:
  using Matrix = CMatrix<Real>;

  explicit Hermitian(Matrix m) : m_(std::move(m)) {
    check_shape(m_);
    const Real scale = m_.cwiseAbs().maxCoeff();
    const Real defect = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
    if (defect > Real(tol::hermitian_defect) * scale) {
      raise<InvalidArgument>("Hermitian: defect ", defect, " exceeds ",
                             Real(tol::hermitian_defect) * scale);
    }
    symmetrize();
  }

  // (M + M^dag)/2 without the defect check, for results that are Hermitian
  // in exact arithmetic.
  static Hermitian hermitian_part(Matrix m) {
    check_shape(m);
    return Hermitian(std::move(m), Trusted{});
  }

  static Hermitian identity(Index d) { return Hermitian(Matrix::Identity(d, d), Trusted{}); }
  static Hermitian zero(Index d) { return Hermitian(Matrix::Zero(d, d), Trusted{}); }
  static Hermitian diagonal(const RVector<Real>& diag) {
    return Hermitian(Matrix(diag.template cast<std::complex<Real>>().asDiagonal()), Trusted{});
  }

  const Matrix& matrix() const noexcept { return m_; }
  Index dim() const noexcept { return m_.rows(); }
  Real trace() const { return m_.diagonal().real().sum(); }
  Real frobenius() const { return m_.norm(); }

  bool is_diagonal() const {
    for (Index j = 0; j < m_.cols(); ++j)
      for (Index i = 0; i < m_.rows(); ++i)
        if (i != j && m_(i, j) != std::complex<Real>(0)) return false;
    return true;
  }

  friend Hermitian operator+(const Hermitian& a, const Hermitian& b) {
    same_dim(a, b);
    return Hermitian(a.m_ + b.m_, Trusted{});
  }
  friend Hermitian operator-(const Hermitian& a, const Hermitian& b) {
    same_dim(a, b);
    return Hermitian(a.m_ - b.m_, Trusted{});
  }
  friend Hermitian operator-(const Hermitian& a) { return Hermitian(-a.m_, Trusted{}); }
  friend Hermitian operator*(Real s, const Hermitian& a) { return Hermitian(s * a.m_, Trusted{}); }
  friend Hermitian operator*(const Hermitian& a, Real s) { return s * a; }
  friend Hermitian operator/(const Hermitian& a, Real s) { return Hermitian(a.m_ / s, Trusted{}); }

 private:
  struct Trusted {};
  Hermitian(Matrix m, Trusted) : m_(std::move(m)) { symmetrize(); }

  static void check_shape(const Matrix& m) {
    if (m.rows() < 1 || m.rows() != m.cols())
      raise<DimensionMismatch>("Hermitian: expected a nonempty square matrix, got ", m.rows(), "x",
                               m.cols());
    if (!m.allFinite()) raise<InvalidArgument>("Hermitian: non-finite entry");
  }
  static void same_dim(const Hermitian& a, const Hermitian& b) {
    if (a.dim() != b.dim())
      raise<DimensionMismatch>("Hermitian: dimension ", a.dim(), " vs ", b.dim());
  }
  void symmetrize() { m_ = ((m_ + m_.adjoint()) / Real(2)).eval(); }

  Matrix m_;
};

using HermitianMatrix = Hermitian<double>;

template <typename Real>
struct EigenSystem {
  RVector<Real> values;   // ascending
  CMatrix<Real> vectors;  // column j pairs with values(j)

  Index dim() const { return values.size(); }

  Real max_abs() const { return dim() == 0 ? Real(0) : values.cwiseAbs().maxCoeff(); }

  // Eigenvalues at or below this count as zero.
  Real cutoff() const { return Real(tol::support_relative) * max_abs(); }

  Index rank() const {
    const Real c = cutoff();
    return static_cast<Index>((values.array() > c).count());
  }

  // Eigenvectors spanning the support, ascending order.
  CMatrix<Real> support_basis() const {
    const Index r = rank();
    return vectors.rightCols(r);
  }

  CMatrix<Real> support_projector() const {
    const CMatrix<Real> b = support_basis();
    return b * b.adjoint();
  }

  Hermitian<Real> reconstruct() const {
    return Hermitian<Real>::hermitian_part(vectors * values.template cast<std::complex<Real>>().asDiagonal() *
                                           vectors.adjoint());
  }
};

namespace detail {

// Largest-magnitude component real positive; near ties go to the first index.
template <typename Real>
void canonicalize_phases(CMatrix<Real>& v) {
  for (Index j = 0; j < v.cols(); ++j) {
    const Real top = v.col(j).cwiseAbs().maxCoeff();
    if (top == Real(0)) continue;
    Index k = 0;
    while (std::abs(v(k, j)) < top * (Real(1) - Real(1e-10))) ++k;
    const std::complex<Real> phase = std::conj(v(k, j)) / std::abs(v(k, j));
    v.col(j) *= phase;
    v(k, j) = std::complex<Real>(std::abs(v(k, j)), 0);
  }
}

}  // namespace detail

template <typename Real>
EigenSystem<Real> eigh(const Hermitian<Real>& h) {
  const Index d = h.dim();
  EigenSystem<Real> es;
  if (h.is_diagonal()) {
    const RVector<Real> diag = h.matrix().diagonal().real();
    std::vector<Index> order(static_cast<size_t>(d));
    std::iota(order.begin(), order.end(), Index(0));
    std::stable_sort(order.begin(), order.end(),
                     [&](Index a, Index b) { return diag(a) < diag(b); });
    es.values.resize(d);
    es.vectors = CMatrix<Real>::Zero(d, d);
    for (Index i = 0; i < d; ++i) {
      es.values(i) = diag(order[static_cast<size_t>(i)]);
      es.vectors(order[static_cast<size_t>(i)], i) = Real(1);
    }
    return es;
  }
  Eigen::SelfAdjointEigenSolver<CMatrix<Real>> solver(h.matrix());
  if (solver.info() != Eigen::Success)
    raise<ConvergenceError>("eigh: no convergence for dimension ", d);
  es.values = solver.eigenvalues();
  es.vectors = solver.eigenvectors();
  detail::canonicalize_phases(es.vectors);
  return es;
}

enum class Apply { everywhere, on_support };

// V diag(fn(lambda)) V^dag. With Apply::on_support, eigenvalues at or below
// the support cutoff map to zero and fn is never called there.
template <typename Real, typename Fn>
Hermitian<Real> matrix_function(const EigenSystem<Real>& es, Fn&& fn,
                                Apply where = Apply::everywhere) {
  const Real cut = es.cutoff();
  RVector<Real> f(es.dim());
  for (Index i = 0; i < es.dim(); ++i) {
    const Real lam = es.values(i);
    if (where == Apply::on_support && lam <= cut) {
      f(i) = Real(0);
      continue;
    }
    const Real v = fn(lam);
    if (!std::isfinite(v))
      raise<DomainError>("matrix_function: function undefined at eigenvalue ", lam);
    f(i) = v;
  }
  return Hermitian<Real>::hermitian_part(es.vectors * f.template cast<std::complex<Real>>().asDiagonal() *
                                         es.vectors.adjoint());
}

template <typename Real, typename Fn>
Hermitian<Real> matrix_function(const Hermitian<Real>& h, Fn&& fn,
                                Apply where = Apply::everywhere) {
  return matrix_function(eigh(h), std::forward<Fn>(fn), where);
}

// ln on the whole spectrum; every eigenvalue must lie above the support cutoff.
template <typename Real>
Hermitian<Real> log_matrix(const EigenSystem<Real>& es, Apply where = Apply::everywhere) {
  const Real cut = es.cutoff();
  return matrix_function(
      es,
      [cut](Real x) {
        if (x <= cut) raise<DomainError>("log_matrix: eigenvalue ", x, " is not in the support");
        return std::log(x);
      },
      where);
}

// Square root of a PSD spectrum; roundoff negatives are read as zero.
template <typename Real>
Hermitian<Real> sqrt_psd(const EigenSystem<Real>& es) {
  return matrix_function(es, [](Real x) { return std::sqrt(std::max(x, Real(0))); });
}

template <typename Real>
Hermitian<Real> pseudo_inverse(const EigenSystem<Real>& es) {
  return matrix_function(es, [](Real x) { return Real(1) / x; }, Apply::on_support);
}

// Positive part: eigenvalues below zero replaced by zero.
template <typename Real>
Hermitian<Real> positive_part(const EigenSystem<Real>& es) {
  return matrix_function(es, [](Real x) { return std::max(x, Real(0)); });
}

template <typename Derived>
typename Derived::RealScalar trace_norm(const Eigen::MatrixBase<Derived>& m) {
  using M = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (!m.allFinite()) raise<InvalidArgument>("trace_norm: non-finite entry");
  Eigen::BDCSVD<M> svd(m.derived().eval());
  return svd.singularValues().sum();
}

template <typename Real>
Real trace_norm(const Hermitian<Real>& h) {
  return eigh(h).values.cwiseAbs().sum();
}

// U with T U Hermitian PSD, from T = W S V^dag: U = V W^dag.
template <typename Real>
CMatrix<Real> polar_unitary(const CMatrix<Real>& t) {
  if (t.rows() < 1 || t.rows() != t.cols())
    raise<DimensionMismatch>("polar_unitary: expected a square matrix, got ", t.rows(), "x",
                             t.cols());
  if (!t.allFinite()) raise<InvalidArgument>("polar_unitary: non-finite entry");
  Eigen::JacobiSVD<CMatrix<Real>> svd(t, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RVector<Real>& s = svd.singularValues();
  if (s(s.size() - 1) <= Real(tol::support_relative) * s(0))
    raise<RankError>("polar_unitary: rank-deficient input (smallest singular value ",
                     s(s.size() - 1), ", largest ", s(0), ")");
  CMatrix<Real> u = svd.matrixV() * svd.matrixU().adjoint();
  const CMatrix<Real> tu = t * u;
  const Real defect = (tu - tu.adjoint()).norm();
  if (defect > Real(tol::polar_residual) * (Real(1) + t.norm()))
    raise<ConvergenceError>("polar_unitary: T U not Hermitian, residual ", defect);
  return u;
}

// Hermitian L with B L = A, following the compact-SVD construction.
// B = U X V (compact), Vc spans the complement of V's rows, C = B^+ A, then
//   L = B^+ A B^dag (B^+)^dag + Vc^dag Vc C^dag V^dag V + V^dag V C Vc^dag Vc.
template <typename Real>
Hermitian<Real> hermitian_factor_solve(const CMatrix<Real>& a, const CMatrix<Real>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || b.size() == 0)
    raise<DimensionMismatch>("hermitian_factor_solve: A is ", a.rows(), "x", a.cols(), ", B is ",
                             b.rows(), "x", b.cols());
  if (!a.allFinite() || !b.allFinite())
    raise<InvalidArgument>("hermitian_factor_solve: non-finite entry");
  const Real na = a.norm();
  const Real nb = b.norm();
  const Real tol = Real(tol::factor_solve);

  const Real herm = (a * b.adjoint() - b * a.adjoint()).norm();
  if (herm > tol * (Real(1) + na * nb))
    raise<PreconditionError>("hermitian_factor_solve: A B^dag is not Hermitian, residual ", herm);

  Eigen::JacobiSVD<CMatrix<Real>> svd(b, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RVector<Real>& s = svd.singularValues();
  const Real smax = s.size() ? s(0) : Real(0);
  Index r = 0;
  while (r < s.size() && s(r) > Real(tol::support_relative) * smax) ++r;
  const Index dp = b.cols();

  const CMatrix<Real> u = svd.matrixU().leftCols(r);
  const CMatrix<Real> v = svd.matrixV().leftCols(r).adjoint();
  const CMatrix<Real> vc = svd.matrixV().rightCols(dp - r).adjoint();

  const Real image = (a - u * (u.adjoint() * a)).norm();
  if (image > tol * (Real(1) + na))
    raise<PreconditionError>(
        "hermitian_factor_solve: column space of A not contained in that of B, residual ", image);

  const RVector<Real> xinv = s.head(r).cwiseInverse();
  const CMatrix<Real> binv = v.adjoint() * xinv.template cast<std::complex<Real>>().asDiagonal() * u.adjoint();
  const CMatrix<Real> c = binv * a;
  const CMatrix<Real> vv = v.adjoint() * v;
  const CMatrix<Real> cc = vc.adjoint() * vc;
  const CMatrix<Real> l =
      binv * a * b.adjoint() * binv.adjoint() + cc * c.adjoint() * vv + vv * c * cc;

  const Real defect = (l - l.adjoint()).norm();
  if (defect > tol * (Real(1) + l.norm()))
    raise<ConvergenceError>("hermitian_factor_solve: L not Hermitian, defect ", defect);
  Hermitian<Real> out = Hermitian<Real>::hermitian_part(l);
  const Real residual = (b * out.matrix() - a).norm();
  if (residual > tol * (Real(1) + na))
    raise<ConvergenceError>("hermitian_factor_solve: B L = A residual ", residual);
  return out;
}

template <typename DA, typename DB>
auto kron(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  using M = Eigen::Matrix<typename DA::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  return M(Eigen::kroneckerProduct(a.derived().eval(), b.derived().eval()));
}

}  // namespace qdiv
