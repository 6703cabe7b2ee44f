#pragma once

// Random primitives shared by the state samplers and the Monte-Carlo drivers.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include "cbound/matrix_core.hpp"

namespace cbound {

using Rng = std::mt19937_64;

/// splitmix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for task `task` of a run seeded with `seed`. The mapping depends only
/// on (seed, stream, task), never on which worker executes the task, so the
/// sampled values are independent of the worker count.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t task) {
  return mix64(mix64(mix64(seed) ^ stream) ^ task);
}

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t task) {
  return Rng(derive_seed(seed, stream, task));
}

/// Uniform (rotation-invariant) point on the unit sphere S_{d-1} in R^d, by
/// normalizing a standard Gaussian vector.
template <typename Real = double, typename Urbg>
RealVector<Real> random_unit_vector(Eigen::Index dim, Urbg& rng) {
  std::normal_distribution<Real> normal(Real(0), Real(1));
  RealVector<Real> v(dim);
  Real norm = 0;
  do {
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = normal(rng);
    norm = v.norm();
  } while (norm < Real(1e-300));
  return v / norm;
}

/// Fixed-size 3-vector variant for the qubit hot loops.
template <typename Real = double, typename Urbg>
Eigen::Matrix<Real, 3, 1> random_unit_vector3(Urbg& rng) {
  std::normal_distribution<Real> normal(Real(0), Real(1));
  Eigen::Matrix<Real, 3, 1> v;
  Real norm = 0;
  do {
    v << normal(rng), normal(rng), normal(rng);
    norm = v.norm();
  } while (norm < Real(1e-300));
  return v / norm;
}

/// Matrix with i.i.d. standard complex Gaussian entries (E|z|^2 = 1).
template <typename Real = double, typename Urbg>
ComplexMatrix<Real> random_ginibre(Eigen::Index rows, Eigen::Index cols, Urbg& rng) {
  std::normal_distribution<Real> normal(Real(0), std::sqrt(Real(0.5)));
  ComplexMatrix<Real> g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) g(i, j) = std::complex<Real>(normal(rng), normal(rng));
  return g;
}

template <typename Real = double, typename Urbg>
ComplexMatrix<Real> random_hermitian(Eigen::Index dim, Urbg& rng) {
  const ComplexMatrix<Real> g = random_ginibre<Real>(dim, dim, rng);
  return (g + g.adjoint()) / Real(2);
}

/// Haar-random unitary: QR of a Ginibre matrix with the phases of R's
/// diagonal pushed into Q.
template <typename Real = double, typename Urbg>
ComplexMatrix<Real> random_unitary(Eigen::Index dim, Urbg& rng) {
  const ComplexMatrix<Real> g = random_ginibre<Real>(dim, dim, rng);
  Eigen::HouseholderQR<ComplexMatrix<Real>> qr(g);
  ComplexMatrix<Real> q = qr.householderQ();
  const ComplexMatrix<Real> r = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < dim; ++i) {
    const auto d = r(i, i);
    const Real m = std::abs(d);
    if (m > Real(0)) q.col(i) *= d / m;
  }
  return q;
}

}  // namespace cbound
