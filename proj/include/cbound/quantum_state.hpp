#pragma once

// Validated density matrices and observables, qubit Bloch conversions, and
// random states/observables.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <string>
#include <variant>
#include <vector>

#include "cbound/errors.hpp"
#include "cbound/matrix_core.hpp"
#include "cbound/sampling.hpp"

namespace cbound {

inline constexpr double kTraceTolerance = 1e-10;
inline constexpr double kNegativeEigenvalueTolerance = 1e-12;

enum class TraceNormalization {
  unit,  // a quantum state: trace one
  any,   // arbitrary positive semidefinite weight, e.g. the identity
};

/// A positive semidefinite weight with its spectrum, eigenvectors, purity and
/// square root cached. With TraceNormalization::unit this is a quantum state.
template <typename Real>
class DensityMatrix {
 public:
  using Matrix = ComplexMatrix<Real>;
  using Vector = RealVector<Real>;

  explicit DensityMatrix(const Matrix& m, TraceNormalization norm = TraceNormalization::unit) : norm_(norm) {
    if (m.rows() != m.cols() || m.rows() == 0) throw InvalidInput("DensityMatrix: expected a non-empty square matrix");
    if (!is_hermitian(m)) {
      throw InvalidInput("DensityMatrix: matrix is not Hermitian (||rho - rho^dag|| = " +
                         std::to_string(double(hermiticity_defect(m))) + ")");
    }
    matrix_ = (m + m.adjoint()) / Real(2);
    auto sys = hermitian_eigensystem(matrix_);

    bool clipped = false;
    for (Eigen::Index i = 0; i < sys.values.size(); ++i) {
      if (sys.values(i) < Real(0)) {
        if (sys.values(i) < -Real(kNegativeEigenvalueTolerance)) {
          throw InvalidInput("DensityMatrix: negative eigenvalue " + std::to_string(double(sys.values(i))));
        }
        sys.values(i) = Real(0);
        clipped = true;
      }
    }
    const Real trace = sys.values.sum();
    if (norm_ == TraceNormalization::unit && std::abs(trace - Real(1)) > Real(kTraceTolerance)) {
      throw InvalidInput("DensityMatrix: trace is " + std::to_string(double(trace)) + ", expected 1");
    }
    if (!(trace > Real(0))) throw InvalidInput("DensityMatrix: weight is identically zero");
    if (clipped) {
      if (norm_ == TraceNormalization::unit) sys.values /= sys.values.sum();
      matrix_ = reconstruct(sys);
    }
    spectrum_ = sys.values;
    eigenvectors_ = sys.vectors;
    sqrt_ = eigenvectors_ * spectrum_.cwiseSqrt().template cast<std::complex<Real>>().asDiagonal() *
            eigenvectors_.adjoint();
    purity_ = spectrum_.squaredNorm();
  }

  /// Diagonal state diag(lambda) in the computational basis, in the given order.
  static DensityMatrix diagonal(const Vector& lambda, TraceNormalization norm = TraceNormalization::unit) {
    return DensityMatrix(Matrix(lambda.template cast<std::complex<Real>>().asDiagonal()), norm);
  }

  static DensityMatrix maximally_mixed(Eigen::Index dim) {
    return diagonal(Vector::Constant(dim, Real(1) / Real(dim)));
  }

  Eigen::Index dim() const { return matrix_.rows(); }
  const Matrix& matrix() const { return matrix_; }
  /// Ascending eigenvalues.
  const Vector& spectrum() const { return spectrum_; }
  /// Columns match spectrum() entry by entry.
  const Matrix& eigenvectors() const { return eigenvectors_; }
  const Matrix& sqrt_matrix() const { return sqrt_; }
  Real purity() const { return purity_; }
  TraceNormalization normalization() const { return norm_; }

  Real lambda_min() const { return spectrum_(0); }
  Real lambda_second() const { return spectrum_(std::min<Eigen::Index>(1, dim() - 1)); }
  Real lambda_max() const { return spectrum_(dim() - 1); }

 private:
  Matrix matrix_;
  Vector spectrum_;
  Matrix eigenvectors_;
  Matrix sqrt_;
  Real purity_ = 0;
  TraceNormalization norm_;
};

/// Hermitian matrix representing a physical quantity.
template <typename Real>
class Observable {
 public:
  using Matrix = ComplexMatrix<Real>;

  explicit Observable(const Matrix& m) {
    if (m.rows() != m.cols() || m.rows() == 0) throw InvalidInput("Observable: expected a non-empty square matrix");
    if (!is_hermitian(m)) {
      throw InvalidInput("Observable: matrix is not Hermitian (||A - A^dag|| = " +
                         std::to_string(double(hermiticity_defect(m))) + ")");
    }
    matrix_ = (m + m.adjoint()) / Real(2);
  }

  Eigen::Index dim() const { return matrix_.rows(); }
  const Matrix& matrix() const { return matrix_; }

 private:
  Matrix matrix_;
};

using DensityMatrixd = DensityMatrix<double>;
using Observabled = Observable<double>;

template <typename Real>
using Vector3 = Eigen::Matrix<Real, 3, 1>;
using Vector3d = Vector3<double>;

/// Pauli expansion A = a0 I + vec . sigma of a qubit observable.
template <typename Real>
struct BlochVector {
  Real a0 = 0;
  Vector3<Real> vec = Vector3<Real>::Zero();

  bool is_normalized(double tol = 1e-10) const { return std::abs(double(vec.norm()) - 1.0) <= tol; }
};

using BlochVectord = BlochVector<double>;

struct SpectralSummary {
  double lambda_min;
  double lambda_second;
  double lambda_max;
  double purity;
};

/// Pauli matrix sigma_k for k = 1, 2, 3; k = 0 gives the identity.
template <typename Real = double>
ComplexMatrix<Real> pauli(int k) {
  using C = std::complex<Real>;
  ComplexMatrix<Real> s(2, 2);
  switch (k) {
    case 0: s << C(1), C(0), C(0), C(1); break;
    case 1: s << C(0), C(1), C(1), C(0); break;
    case 2: s << C(0), C(0, -1), C(0, 1), C(0); break;
    case 3: s << C(1), C(0), C(0), C(-1); break;
    default: throw InvalidInput("pauli: index must be 0..3");
  }
  return s;
}

template <typename Real>
Observable<Real> observable_from_bloch(const BlochVector<Real>& b) {
  ComplexMatrix<Real> m = b.a0 * pauli<Real>(0);
  for (int k = 0; k < 3; ++k) m += b.vec(k) * pauli<Real>(k + 1);
  return Observable<Real>(m);
}

template <typename Real>
BlochVector<Real> bloch_from_observable(const Observable<Real>& a) {
  if (a.dim() != 2) throw InvalidInput("bloch_from_observable: qubit observable required");
  BlochVector<Real> b;
  b.a0 = detail::real_part_checked<Real>(a.matrix().trace() / Real(2), "bloch_from_observable");
  for (int k = 0; k < 3; ++k) {
    b.vec(k) = detail::real_part_checked<Real>((a.matrix() * pauli<Real>(k + 1)).trace() / Real(2),
                                               "bloch_from_observable");
  }
  return b;
}

/// rho = (I + c . sigma) / 2.
template <typename Real>
DensityMatrix<Real> density_from_bloch(const Vector3<Real>& c) {
  if (c.norm() > Real(1) + Real(1e-12)) {
    throw InvalidInput("density_from_bloch: |c| = " + std::to_string(double(c.norm())) + " lies outside the Bloch ball");
  }
  ComplexMatrix<Real> m = pauli<Real>(0);
  for (int k = 0; k < 3; ++k) m += c(k) * pauli<Real>(k + 1);
  return DensityMatrix<Real>(m / Real(2));
}

template <typename Real>
Vector3<Real> bloch_from_density(const DensityMatrix<Real>& rho) {
  if (rho.dim() != 2) throw InvalidInput("bloch_from_density: qubit state required");
  Vector3<Real> c;
  for (int k = 0; k < 3; ++k) {
    c(k) = detail::real_part_checked<Real>((rho.matrix() * pauli<Real>(k + 1)).trace(), "bloch_from_density");
  }
  return c;
}

template <typename Real>
SpectralSummary spectral_summary(const DensityMatrix<Real>& rho) {
  return {double(rho.lambda_min()), double(rho.lambda_second()), double(rho.lambda_max()), double(rho.purity())};
}

// Overloads of the weighted forms taking a validated weight.
template <typename DerivedA, typename DerivedB, typename Real>
std::complex<Real> weighted_inner_product(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b,
                                          const DensityMatrix<Real>& rho) {
  return weighted_inner_product(a, b, rho.matrix());
}

template <typename DerivedA, typename Real>
Real weighted_norm_sq(const Eigen::MatrixBase<DerivedA>& a, const DensityMatrix<Real>& rho) {
  return weighted_norm_sq(a, rho.matrix());
}

// ---------------------------------------------------------------------------
// Sampling

struct HilbertSchmidt {};
struct FlatSimplex {};
struct FixedSpectrum {
  std::vector<double> lambda;
};
using SpectrumSpec = std::variant<HilbertSchmidt, FlatSimplex, FixedSpectrum>;

/// Ascending spectrum drawn uniformly from the probability simplex.
template <typename Urbg>
RealVectord sample_flat_simplex(Eigen::Index dim, Urbg& rng) {
  std::exponential_distribution<double> expo(1.0);
  RealVectord lambda(dim);
  double total = 0;
  do {
    for (Eigen::Index i = 0; i < dim; ++i) lambda(i) = expo(rng);
    total = lambda.sum();
  } while (!(total > 0));
  lambda /= total;
  std::sort(lambda.data(), lambda.data() + dim);
  return lambda;
}

/// Random state of dimension dim.
///  - HilbertSchmidt: G G^dag / Tr(G G^dag) with G complex Ginibre.
///  - FlatSimplex: diagonal, eigenvalues Dirichlet(1, ..., 1), ascending.
///  - FixedSpectrum: diagonal with the given eigenvalues in the given order.
template <typename Urbg>
DensityMatrixd sample_density(Eigen::Index dim, const SpectrumSpec& spec, Urbg& rng) {
  if (dim < 2) throw InvalidInput("sample_density: dim must be >= 2");
  if (std::holds_alternative<HilbertSchmidt>(spec)) {
    const ComplexMatrixd g = random_ginibre<double>(dim, dim, rng);
    ComplexMatrixd m = g * g.adjoint();
    m /= m.trace().real();
    return DensityMatrixd(m);
  }
  if (std::holds_alternative<FlatSimplex>(spec)) {
    return DensityMatrixd::diagonal(sample_flat_simplex(dim, rng));
  }
  const auto& fixed = std::get<FixedSpectrum>(spec).lambda;
  if (static_cast<Eigen::Index>(fixed.size()) != dim) {
    throw DimensionMismatch("sample_density: fixed spectrum", static_cast<long>(fixed.size()), dim);
  }
  double total = 0;
  for (double l : fixed) {
    if (!(l >= 0)) throw InvalidInput("sample_density: fixed spectrum has a negative entry");
    total += l;
  }
  if (std::abs(total - 1.0) > kTraceTolerance) throw InvalidInput("sample_density: fixed spectrum does not sum to 1");
  return DensityMatrixd::diagonal(Eigen::Map<const RealVectord>(fixed.data(), dim));
}

/// Unit-normalized random observable.
///  - dim 2: sum_i a_i sigma_i with a uniform on the 2-sphere.
///  - dim > 2: diagonal with eigenvalue vector uniform on S_{d-1}.
template <typename Urbg>
Observabled sample_observable_unit(Eigen::Index dim, Urbg& rng) {
  if (dim < 2) throw InvalidInput("sample_observable_unit: dim must be >= 2");
  if (dim == 2) {
    BlochVectord b;
    b.vec = random_unit_vector3<double>(rng);
    return observable_from_bloch(b);
  }
  const RealVectord a = random_unit_vector<double>(dim, rng);
  return Observabled(ComplexMatrixd(a.cast<std::complex<double>>().asDiagonal()));
}

}  // namespace cbound
