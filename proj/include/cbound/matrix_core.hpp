#pragma once

// Dense complex matrix arithmetic: commutators, the plain and weighted
// Frobenius (semi-)norms, and a deterministic Hermitian eigensystem.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <string>

#include "cbound/errors.hpp"

namespace cbound {

template <typename Real>
using ComplexMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using ComplexVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using RealVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using ComplexMatrixd = ComplexMatrix<double>;
using ComplexVectord = ComplexVector<double>;
using RealVectord = RealVector<double>;

inline constexpr double kHermitianTolerance = 1e-10;
inline constexpr double kImaginaryResidueTolerance = 1e-9;

/// Ascending eigenvalues with orthonormal eigenvectors stored as columns.
template <typename Real>
struct EigenSystem {
  RealVector<Real> values;
  ComplexMatrix<Real> vectors;

  Eigen::Index dim() const { return values.size(); }
};

namespace detail {

template <typename DerivedA, typename DerivedB>
void require_same_square_dims(const Eigen::MatrixBase<DerivedA>& a,
                              const Eigen::MatrixBase<DerivedB>& b, const char* what) {
  if (a.rows() != a.cols()) throw InvalidInput(std::string(what) + ": matrix is not square");
  if (b.rows() != b.cols()) throw InvalidInput(std::string(what) + ": matrix is not square");
  if (a.rows() != b.rows()) throw DimensionMismatch(what, a.rows(), b.rows());
}

// Accepts a trace that is analytically real; throws if the imaginary part is
// larger than accumulated round-off can explain.
template <typename Real>
Real real_part_checked(std::complex<Real> z, const char* what) {
  using std::abs;
  const Real scale = std::max(Real(1), abs(z.real()));
  if (abs(z.imag()) > Real(kImaginaryResidueTolerance) * scale) {
    throw NumericalError(std::string(what) + ": imaginary residue " + std::to_string(double(z.imag())) +
                         " on an analytically real quantity");
  }
  return z.real();
}

}  // namespace detail

/// [A, B] = AB - BA.
template <typename DerivedA, typename DerivedB>
typename DerivedA::PlainObject commutator(const Eigen::MatrixBase<DerivedA>& a,
                                          const Eigen::MatrixBase<DerivedB>& b) {
  detail::require_same_square_dims(a, b, "commutator");
  return a * b - b * a;
}

/// {A, B} = AB + BA.
template <typename DerivedA, typename DerivedB>
typename DerivedA::PlainObject anticommutator(const Eigen::MatrixBase<DerivedA>& a,
                                              const Eigen::MatrixBase<DerivedB>& b) {
  detail::require_same_square_dims(a, b, "anticommutator");
  return a * b + b * a;
}

/// Tr(A^dagger B W) for an arbitrary positive semidefinite weight W. The
/// weight does not have to be trace-normalized; W = I gives the
/// Hilbert-Schmidt inner product.
template <typename DerivedA, typename DerivedB, typename DerivedW>
std::complex<typename DerivedA::RealScalar> weighted_inner_product(const Eigen::MatrixBase<DerivedA>& a,
                                                                   const Eigen::MatrixBase<DerivedB>& b,
                                                                   const Eigen::MatrixBase<DerivedW>& weight) {
  detail::require_same_square_dims(a, b, "weighted_inner_product");
  detail::require_same_square_dims(a, weight, "weighted_inner_product");
  // Tr(A^dag (B W)) = sum_ij conj(A_ij) (BW)_ij
  return (a.conjugate().cwiseProduct(b * weight)).sum();
}

/// Tr(A^dagger A W), the squared weighted Frobenius semi-norm.
template <typename DerivedA, typename DerivedW>
typename DerivedA::RealScalar weighted_norm_sq(const Eigen::MatrixBase<DerivedA>& a,
                                               const Eigen::MatrixBase<DerivedW>& weight) {
  using Real = typename DerivedA::RealScalar;
  const auto z = weighted_inner_product(a, a, weight);
  const Real value = detail::real_part_checked<Real>(z, "weighted_norm_sq");
  // Tiny negative values are round-off on a PSD form.
  return value < Real(0) && value > -Real(kImaginaryResidueTolerance) ? Real(0) : value;
}

/// Sum of squared moduli of the entries.
template <typename Derived>
typename Derived::RealScalar frobenius_norm_sq(const Eigen::MatrixBase<Derived>& a) {
  return a.squaredNorm();
}

template <typename Derived>
typename Derived::RealScalar hermiticity_defect(const Eigen::MatrixBase<Derived>& h) {
  return (h - h.adjoint()).norm();
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& h, double tol = kHermitianTolerance) {
  return h.rows() == h.cols() && double(hermiticity_defect(h)) <= tol;
}

/// Eigensystem of a Hermitian matrix with values in ascending order.
///
/// The eigenvector gauge is fixed so that repeated calls on the same input
/// give identical output: inside each (near-)degenerate cluster the vectors
/// are obtained by Gram-Schmidt on the cluster projector applied to the
/// canonical basis vectors e_0, e_1, ... in order. For a simple eigenvalue
/// this amounts to making the first non-negligible component real positive.
/// Callers should still not depend on any particular gauge.
template <typename Derived>
EigenSystem<typename Derived::RealScalar> hermitian_eigensystem(const Eigen::MatrixBase<Derived>& h) {
  using Real = typename Derived::RealScalar;
  using Matrix = ComplexMatrix<Real>;
  using Vector = ComplexVector<Real>;

  if (h.rows() != h.cols() || h.rows() == 0) {
    throw InvalidInput("hermitian_eigensystem: expected a non-empty square matrix");
  }
  const Real defect = hermiticity_defect(h);
  if (double(defect) > kHermitianTolerance) {
    throw InvalidInput("hermitian_eigensystem: matrix is not Hermitian (||H - H^dag|| = " +
                       std::to_string(double(defect)) + ")");
  }
  const Matrix sym = (h + h.adjoint()) / Real(2);
  const Eigen::Index dim = sym.rows();

  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("hermitian_eigensystem: QR iteration did not converge within " +
                           std::to_string(30 * dim) + " iterations (dim " + std::to_string(dim) + ")");
  }

  EigenSystem<Real> out;
  out.values = solver.eigenvalues();
  out.vectors.resize(dim, dim);
  const Matrix& raw = solver.eigenvectors();

  const Real scale = std::max(Real(1), out.values.cwiseAbs().maxCoeff());
  const Real cluster_tol = Real(1e-9) * scale;

  Eigen::Index begin = 0;
  while (begin < dim) {
    Eigen::Index end = begin + 1;
    while (end < dim && out.values(end) - out.values(end - 1) <= cluster_tol) ++end;
    const Eigen::Index size = end - begin;

    const Matrix block = raw.middleCols(begin, size);
    const Matrix projector = block * block.adjoint();
    Eigen::Index found = 0;
    // Threshold on the residual norm; a cluster of size k always has at
    // least k canonical vectors with residual >= 1/sqrt(dim) along the way.
    const Real accept = Real(0.5) / std::sqrt(Real(dim));
    for (Eigen::Index i = 0; i < dim && found < size; ++i) {
      Vector v = projector.col(i);
      for (Eigen::Index k = 0; k < found; ++k) {
        const auto u = out.vectors.col(begin + k);
        v -= u * u.dot(v);
      }
      const Real norm = v.norm();
      if (norm > accept) {
        out.vectors.col(begin + found) = v / norm;
        ++found;
      }
    }
    if (found < size) {
      // Threshold too strict for a pathological cluster; keep the solver's vectors.
      out.vectors.middleCols(begin, size) = block;
    }
    begin = end;
  }
  return out;
}

/// Reassemble sum_i values_i |v_i><v_i|.
template <typename Real>
ComplexMatrix<Real> reconstruct(const EigenSystem<Real>& sys) {
  return sys.vectors * sys.values.template cast<std::complex<Real>>().asDiagonal() * sys.vectors.adjoint();
}

}  // namespace cbound
