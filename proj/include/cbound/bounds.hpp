#pragma once

// Variances, skew information and the five variance-product lower bounds:
//   robertson    1/4 |<[A,B]>|^2
//   schrodinger  robertson + |1/2 <{A,B}> - <A><B>|^2
//   luo_park     robertson + C(A) C(B),  C(X) = Tr(sqrt(rho) X sqrt(rho) X) - <X>^2
//   bound1       lambda_min^2 / (2 lambda_max) ||[A,B]||_rho^2
//   bound2       lambda_min lambda_second / (lambda_min + lambda_second) ||[A,B]||_rho^2
// bound1 is a theorem; bound2 rests on the generalized commutator
// inequality, which is only proven for qubits.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "cbound/errors.hpp"
#include "cbound/matrix_core.hpp"
#include "cbound/quantum_state.hpp"

namespace cbound {

inline constexpr double kClassicalClipTolerance = 1e-12;

struct BoundReport {
  double product = 0;  // V(A) V(B)
  double robertson = 0;
  double schrodinger = 0;
  double luo_park = 0;
  double bound1 = 0;
  double bound2 = 0;
  long dim = 0;
  double purity = 0;
  // lambda_min + lambda_second == 0: bound2 is reported as 0.
  bool degenerate = false;
  // Tr(A^2 rho) Tr(B^2 rho); an upper bound on every other field, used as
  // the absolute scale for round-off slack.
  double scale = 0;
};

/// Pass flags for product >= bound, one per relation.
struct InequalityFlags {
  bool robertson = true;
  bool schrodinger = true;
  bool luo_park = true;
  bool bound1 = true;
  bool bound2 = true;  // conjectured for dim > 2

  bool hard_ok() const { return robertson && schrodinger && luo_park && bound1; }
};

namespace detail {

template <typename Real>
void require_dims(const Observable<Real>& x, const DensityMatrix<Real>& rho, const char* what) {
  if (x.dim() != rho.dim()) throw DimensionMismatch(what, x.dim(), rho.dim());
}

template <typename Real>
void require_dims(const Observable<Real>& a, const Observable<Real>& b, const DensityMatrix<Real>& rho,
                  const char* what) {
  if (a.dim() != b.dim()) throw DimensionMismatch(what, a.dim(), b.dim());
  require_dims(a, rho, what);
}

}  // namespace detail

/// <X> = Tr(X rho).
template <typename Real>
Real expectation(const Observable<Real>& x, const DensityMatrix<Real>& rho) {
  detail::require_dims(x, rho, "expectation");
  const std::complex<Real> t = (x.matrix().cwiseProduct(rho.matrix().transpose())).sum();
  return detail::real_part_checked<Real>(t, "expectation");
}

/// V(X) = Tr(X^2 rho) - <X>^2, evaluated as ||X - <X> I||_rho^2 so it is
/// non-negative by construction.
template <typename Real>
Real variance(const Observable<Real>& x, const DensityMatrix<Real>& rho) {
  detail::require_dims(x, rho, "variance");
  const Real mean = expectation(x, rho);
  const ComplexMatrix<Real> centered =
      x.matrix() - mean * ComplexMatrix<Real>::Identity(x.dim(), x.dim());
  return weighted_norm_sq(centered, rho);
}

/// Tr(sqrt(rho) X sqrt(rho) X).
template <typename Real>
Real sqrt_overlap(const Observable<Real>& x, const DensityMatrix<Real>& rho) {
  detail::require_dims(x, rho, "sqrt_overlap");
  const ComplexMatrix<Real> half = rho.sqrt_matrix() * x.matrix();
  const std::complex<Real> t = (half.cwiseProduct(half.transpose())).sum();
  return detail::real_part_checked<Real>(t, "sqrt_overlap");
}

/// Wigner-Yanase skew information Tr(X^2 rho) - Tr(sqrt(rho) X sqrt(rho) X).
template <typename Real>
Real skew_information(const Observable<Real>& x, const DensityMatrix<Real>& rho) {
  detail::require_dims(x, rho, "skew_information");
  const Real second = weighted_norm_sq(x.matrix(), rho);
  const Real value = second - sqrt_overlap(x, rho);
  return std::max(value, Real(0));
}

/// C(X) = V(X) - I(X) = Tr(sqrt(rho) X sqrt(rho) X) - <X>^2. Round-off
/// negativity up to 1e-12 (relative to Tr(X^2 rho)) is clipped to zero;
/// anything larger is a numerical error.
template <typename Real>
Real classical_uncertainty(const Observable<Real>& x, const DensityMatrix<Real>& rho) {
  const Real mean = expectation(x, rho);
  const Real value = sqrt_overlap(x, rho) - mean * mean;
  if (value >= Real(0)) return value;
  const Real tol = Real(kClassicalClipTolerance) * std::max(Real(1), weighted_norm_sq(x.matrix(), rho));
  if (value < -tol) {
    throw NumericalError("classical_uncertainty: value " + std::to_string(double(value)) + " is negative");
  }
  return Real(0);
}

template <typename Real>
Real bound_robertson(const Observable<Real>& a, const Observable<Real>& b, const DensityMatrix<Real>& rho) {
  detail::require_dims(a, b, rho, "bound_robertson");
  const ComplexMatrix<Real> c = commutator(a.matrix(), b.matrix());
  const std::complex<Real> t = (c.cwiseProduct(rho.matrix().transpose())).sum();
  return std::norm(t) / Real(4);
}

template <typename Real>
Real covariance_term(const Observable<Real>& a, const Observable<Real>& b, const DensityMatrix<Real>& rho) {
  detail::require_dims(a, b, rho, "covariance_term");
  const ComplexMatrix<Real> ac = anticommutator(a.matrix(), b.matrix());
  const std::complex<Real> t = (ac.cwiseProduct(rho.matrix().transpose())).sum();
  return std::norm(t / Real(2) - expectation(a, rho) * expectation(b, rho));
}

template <typename Real>
Real bound_schrodinger(const Observable<Real>& a, const Observable<Real>& b, const DensityMatrix<Real>& rho) {
  return bound_robertson(a, b, rho) + covariance_term(a, b, rho);
}

template <typename Real>
Real bound_luo_park(const Observable<Real>& a, const Observable<Real>& b, const DensityMatrix<Real>& rho) {
  return bound_robertson(a, b, rho) + classical_uncertainty(a, rho) * classical_uncertainty(b, rho);
}

/// ||[A,B]||_rho^2.
template <typename Real>
Real commutator_norm_sq(const Observable<Real>& a, const Observable<Real>& b, const DensityMatrix<Real>& rho) {
  detail::require_dims(a, b, rho, "commutator_norm_sq");
  return weighted_norm_sq(commutator(a.matrix(), b.matrix()), rho);
}

template <typename Real>
Real bound_one_coefficient(const DensityMatrix<Real>& rho) {
  const Real lm = rho.lambda_min();
  return lm * lm / (Real(2) * rho.lambda_max());
}

/// lambda_min lambda_second / (lambda_min + lambda_second); 0 when both vanish.
template <typename Real>
Real bound_two_coefficient(const DensityMatrix<Real>& rho) {
  const Real lm = rho.lambda_min();
  const Real ls = rho.lambda_second();
  const Real denom = lm + ls;
  return denom > Real(0) ? lm * ls / denom : Real(0);
}

template <typename Real>
Real bound_one(const Observable<Real>& a, const Observable<Real>& b, const DensityMatrix<Real>& rho) {
  return bound_one_coefficient(rho) * commutator_norm_sq(a, b, rho);
}

template <typename Real>
Real bound_two(const Observable<Real>& a, const Observable<Real>& b, const DensityMatrix<Real>& rho) {
  return bound_two_coefficient(rho) * commutator_norm_sq(a, b, rho);
}

/// All five bounds plus the variance product, sharing intermediate results.
template <typename Real>
BoundReport compute_bounds(const Observable<Real>& a, const Observable<Real>& b, const DensityMatrix<Real>& rho) {
  detail::require_dims(a, b, rho, "compute_bounds");
  BoundReport r;
  r.dim = static_cast<long>(rho.dim());
  r.purity = double(rho.purity());
  r.degenerate = !(rho.lambda_min() + rho.lambda_second() > Real(0));
  const Real va = variance(a, rho);
  const Real vb = variance(b, rho);
  r.product = double(va * vb);
  r.scale = double(weighted_norm_sq(a.matrix(), rho) * weighted_norm_sq(b.matrix(), rho));

  const Real robertson = bound_robertson(a, b, rho);
  r.robertson = double(robertson);
  r.schrodinger = double(robertson + covariance_term(a, b, rho));
  r.luo_park = double(robertson + classical_uncertainty(a, rho) * classical_uncertainty(b, rho));
  const Real comm = commutator_norm_sq(a, b, rho);
  r.bound1 = double(bound_one_coefficient(rho) * comm);
  r.bound2 = double(bound_two_coefficient(rho) * comm);
  return r;
}

/// A bound counts as violated when it exceeds the product by more than
/// rel_slack * product plus an absolute round-off floor of 1e-13 * scale.
inline bool exceeds(double bound, double product, double scale, double rel_slack) {
  return bound - product > rel_slack * std::max(product, 0.0) + 1e-13 * scale;
}

inline InequalityFlags check_inequalities(const BoundReport& r, double hard_slack = 1e-10,
                                          double conjecture_slack = 1e-9) {
  InequalityFlags f;
  f.robertson = !exceeds(r.robertson, r.product, r.scale, hard_slack);
  f.schrodinger = !exceeds(r.schrodinger, r.product, r.scale, hard_slack);
  f.luo_park = !exceeds(r.luo_park, r.product, r.scale, hard_slack);
  f.bound1 = !exceeds(r.bound1, r.product, r.scale, hard_slack);
  f.bound2 = !exceeds(r.bound2, r.product, r.scale, conjecture_slack);
  return f;
}

// ---------------------------------------------------------------------------
// Qubit closed forms for traceless unit observables A = a.sigma, B = b.sigma
// and the state rho = (I + c.sigma) / 2.

struct QubitBounds {
  double product;
  double robertson;
  double schrodinger;
  double luo_park;
  double bound1;
  double bound2;
};

/// Unchecked closed forms; the Monte-Carlo drivers call this in the hot loop.
inline QubitBounds qubit_bounds_unchecked(const Vector3d& a, const Vector3d& b, const Vector3d& c) {
  const double c2 = c.squaredNorm();
  const double purity = 0.5 * (1.0 + c2);
  const double r = std::sqrt(std::max(0.0, 2.0 * purity - 1.0));
  const Vector3d axb = a.cross(b);
  const double cross2 = axb.squaredNorm();
  const double ac = a.dot(c);
  const double bc = b.dot(c);

  QubitBounds q;
  q.product = (a.squaredNorm() - ac * ac) * (b.squaredNorm() - bc * bc);
  const double triple = axb.dot(c);
  q.robertson = triple * triple;
  const double cov = a.dot(b) - ac * bc;
  q.schrodinger = q.robertson + cov * cov;

  const double s = std::sqrt(std::max(0.0, 1.0 - c2));
  const double coeff = 1.0 - c2 - s;
  // coeff -> 0 as |c| -> 0, which makes the direction term vanish in the limit.
  const bool tiny = std::sqrt(c2) < 1e-14;
  const double fa = s + (tiny ? 0.0 : coeff * ac * ac / c2);
  const double fb = s + (tiny ? 0.0 : coeff * bc * bc / c2);
  q.luo_park = q.robertson + fa * fb;

  q.bound1 = 2.0 * (purity - r) / (1.0 + r) * cross2;
  q.bound2 = 2.0 * (1.0 - purity) * cross2;
  return q;
}

/// Closed-form bounds for unit traceless qubit observables.
inline BoundReport qubit_bounds_closed_form(const BlochVectord& a, const BlochVectord& b, const Vector3d& c) {
  if (!a.is_normalized() || !b.is_normalized()) {
    throw InvalidInput("qubit_bounds_closed_form: observable Bloch vectors must have unit length");
  }
  if (a.a0 != 0.0 || b.a0 != 0.0) {
    throw InvalidInput("qubit_bounds_closed_form: observables must be traceless (a0 = b0 = 0)");
  }
  if (c.norm() > 1.0 + 1e-12) throw InvalidInput("qubit_bounds_closed_form: |c| > 1 is not a state");
  const QubitBounds q = qubit_bounds_unchecked(a.vec, b.vec, c);
  BoundReport r;
  r.dim = 2;
  r.purity = 0.5 * (1.0 + c.squaredNorm());
  r.product = q.product;
  r.robertson = q.robertson;
  r.schrodinger = q.schrodinger;
  r.luo_park = q.luo_park;
  r.bound1 = q.bound1;
  r.bound2 = q.bound2;
  r.degenerate = c.norm() >= 1.0;
  r.scale = 1.0;
  return r;
}

/// ||[A,B]||_rho^2 for qubits, which equals 4 |a x b|^2 for every state c.
inline double qubit_commutator_norm_identity(const BlochVectord& a, const BlochVectord& b, const Vector3d& c) {
  if (a.a0 != 0.0 || b.a0 != 0.0) {
    throw InvalidInput("qubit_commutator_norm_identity: observables must be traceless");
  }
  if (c.norm() > 1.0 + 1e-12) throw InvalidInput("qubit_commutator_norm_identity: |c| > 1 is not a state");
  return 4.0 * a.vec.cross(b.vec).squaredNorm();
}

}  // namespace cbound
