#include <doctest.h>

#include <random>

#include "cbound/errors.hpp"
#include "cbound/quantum_state.hpp"
#include "cbound/sampling.hpp"
#include "oracle.hpp"

using namespace cbound;
using oracle::cd;

TEST_CASE("density from Bloch vector examples") {
  const auto mixed = density_from_bloch(Vector3d(0, 0, 0));
  CHECK((mixed.matrix() - ComplexMatrixd::Identity(2, 2) / 2.0).norm() < 1e-15);
  CHECK(mixed.purity() == doctest::Approx(0.5).epsilon(1e-15));

  const auto pure = density_from_bloch(Vector3d(0, 0, 1));
  CHECK(std::abs(pure.matrix()(0, 0) - cd(1, 0)) < 1e-15);
  CHECK(std::abs(pure.matrix()(1, 1)) < 1e-15);
  CHECK(pure.purity() == doctest::Approx(1.0).epsilon(1e-15));

  const auto half = density_from_bloch(Vector3d(0, 0, 0.5));
  CHECK(std::abs(half.matrix()(0, 0) - cd(0.75, 0)) < 1e-15);
  CHECK(half.spectrum()(0) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(half.spectrum()(1) == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(half.purity() == doctest::Approx(5.0 / 8.0).epsilon(1e-14));
}

TEST_CASE("density from Bloch vector rejects points outside the ball") {
  CHECK_THROWS_AS(density_from_bloch(Vector3d(0, 0, 1.001)), InvalidInput);
  CHECK_NOTHROW(density_from_bloch(Vector3d(0, 0, 1.0 + 1e-13)));
}

TEST_CASE("Bloch round trip for random qubit states") {
  std::mt19937_64 g(1);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 1000; ++t) {
    const Vector3d c = oracle::unit3(g) * std::cbrt(u(g));
    const auto rho = density_from_bloch(c);
    CHECK((bloch_from_density(rho) - c).norm() < 1e-12);
    CHECK((rho.matrix() - oracle::bloch_matrix(0.5, c / 2)).norm() < 1e-14);
  }
}

TEST_CASE("observable Bloch round trip") {
  std::mt19937_64 g(2);
  for (int t = 0; t < 100; ++t) {
    BlochVectord b{0.3 * t, oracle::unit3(g)};
    const auto a = observable_from_bloch(b);
    const auto back = bloch_from_observable(a);
    CHECK(back.a0 == doctest::Approx(b.a0));
    CHECK((back.vec - b.vec).norm() < 1e-14);
    CHECK(back.is_normalized());
  }
}

TEST_CASE("spectral summary examples") {
  const auto s = spectral_summary(DensityMatrixd::maximally_mixed(2));
  CHECK(s.lambda_min == doctest::Approx(0.5));
  CHECK(s.lambda_second == doctest::Approx(0.5));
  CHECK(s.lambda_max == doctest::Approx(0.5));
  CHECK(s.purity == doctest::Approx(0.5));

  // Purity 5/8 has |c|^2 = 1/4.
  const auto q = spectral_summary(density_from_bloch(Vector3d(0.3, 0.0, 0.4)));
  CHECK(q.lambda_min == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(q.lambda_max == doctest::Approx(0.75).epsilon(1e-14));

  Eigen::Vector3d lam(1.0 / 6, 2.0 / 6, 3.0 / 6);
  const auto t = spectral_summary(DensityMatrixd::diagonal(lam));
  CHECK(t.lambda_min == doctest::Approx(1.0 / 6).epsilon(1e-14));
  CHECK(t.lambda_second == doctest::Approx(1.0 / 3).epsilon(1e-14));
  CHECK(t.lambda_max == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(t.purity == doctest::Approx(14.0 / 36).epsilon(1e-14));
}

TEST_CASE("qubit eigenvalues follow from purity") {
  Rng rng = make_rng(3, 0, 0);
  for (int t = 0; t < 500; ++t) {
    const auto rho = sample_density(2, HilbertSchmidt{}, rng);
    const double p = rho.purity();
    const double r = std::sqrt(2 * p - 1);
    CHECK(std::abs(rho.lambda_min() - (1 - r) / 2) < 1e-12);
    CHECK(std::abs(rho.lambda_max() - (1 + r) / 2) < 1e-12);
    CHECK(rho.lambda_second() == rho.lambda_max());
  }
}

TEST_CASE("density matrix validation") {
  CHECK_THROWS_AS(DensityMatrixd(ComplexMatrixd(oracle::pauli(1) + cd(0, 1) * oracle::pauli(3))), InvalidInput);
  CHECK_THROWS_AS(DensityMatrixd::diagonal(Eigen::Vector2d(1.1, -0.1)), InvalidInput);
  CHECK_THROWS_AS(DensityMatrixd::diagonal(Eigen::Vector2d(0.6, 0.6)), InvalidInput);
  CHECK_NOTHROW(DensityMatrixd::diagonal(Eigen::Vector2d(0.6, 0.6), TraceNormalization::any));
  CHECK_THROWS_AS(DensityMatrixd(ComplexMatrixd(2, 3)), InvalidInput);
}

TEST_CASE("tiny negative eigenvalues are clipped and the trace restored") {
  const auto rho = DensityMatrixd::diagonal(Eigen::Vector3d(-5e-13, 0.5, 0.5 + 5e-13));
  CHECK(rho.lambda_min() == 0.0);
  CHECK(std::abs(rho.spectrum().sum() - 1) < 1e-15);
  CHECK(std::abs(rho.matrix().trace().real() - 1) < 1e-15);
}

TEST_CASE("square root cache") {
  Rng rng = make_rng(4, 0, 0);
  for (int t = 0; t < 200; ++t) {
    const int d = 2 + t % 8;
    const auto rho = sample_density(d, t % 2 ? SpectrumSpec(HilbertSchmidt{}) : SpectrumSpec(FlatSimplex{}), rng);
    CHECK((rho.sqrt_matrix() * rho.sqrt_matrix() - rho.matrix()).norm() < 1e-9);
    CHECK((rho.sqrt_matrix() - oracle::sqrt_psd(rho.matrix())).norm() < 1e-7);
    CHECK(rho.purity() >= 1.0 / d - 1e-12);
    CHECK(rho.purity() <= 1.0 + 1e-12);
  }
}

TEST_CASE("fixed spectrum sampling") {
  Rng rng = make_rng(5, 0, 0);
  const auto rho = sample_density(2, FixedSpectrum{{0.5, 0.5}}, rng);
  CHECK((rho.matrix() - ComplexMatrixd::Identity(2, 2) / 2.0).norm() < 1e-15);
  CHECK_THROWS_AS(sample_density(2, FixedSpectrum{{0.7, 0.7}}, rng), InvalidInput);
  CHECK_THROWS_AS(sample_density(2, FixedSpectrum{{1.2, -0.2}}, rng), InvalidInput);
  CHECK_THROWS_AS(sample_density(3, FixedSpectrum{{0.5, 0.5}}, rng), InvalidInput);
  CHECK_THROWS_AS(sample_density(1, HilbertSchmidt{}, rng), InvalidInput);
}

TEST_CASE("Hilbert-Schmidt sampling statistics") {
  Rng rng = make_rng(6, 0, 0);
  double mean = 0;
  const int n = 10000;
  for (int t = 0; t < n; ++t) {
    const auto rho = sample_density(4, HilbertSchmidt{}, rng);
    CHECK(std::abs(rho.matrix().trace().real() - 1) < 1e-12);
    mean += rho.purity() / n;
  }
  CHECK(mean > 0.25);
  CHECK(mean < 1.0);
  // Known mean purity of the induced measure: 2d/(d^2+1) = 8/17.
  CHECK(std::abs(mean - 8.0 / 17) < 0.01);
}

TEST_CASE("flat simplex sampling") {
  Rng rng = make_rng(7, 0, 0);
  for (int t = 0; t < 100; ++t) {
    const auto rho = sample_density(3, FlatSimplex{}, rng);
    CHECK((rho.matrix() - ComplexMatrixd(rho.matrix().diagonal().asDiagonal())).norm() == 0.0);
    CHECK(std::abs(rho.spectrum().sum() - 1) < 1e-14);
    CHECK(rho.matrix()(0, 0).real() <= rho.matrix()(1, 1).real());
    CHECK(rho.matrix()(1, 1).real() <= rho.matrix()(2, 2).real());
  }
}

TEST_CASE("unit observables") {
  Rng rng = make_rng(8, 0, 0);
  for (int t = 0; t < 100; ++t) {
    const auto a = sample_observable_unit(2, rng);
    CHECK(std::abs(a.matrix().trace()) < 1e-15);
    CHECK(a.matrix().squaredNorm() == doctest::Approx(2.0).epsilon(1e-14));
    const auto b = sample_observable_unit(4, rng);
    CHECK(b.matrix().diagonal().real().norm() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(b.matrix().norm() == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("unit qubit observables are uniform on the sphere") {
  Rng rng = make_rng(9, 0, 0);
  const int n = 1000000;
  Eigen::Matrix3d sum = Eigen::Matrix3d::Zero();
  Eigen::Matrix3d sum2 = Eigen::Matrix3d::Zero();
  for (int t = 0; t < n; ++t) {
    const Vector3d a = bloch_from_observable(sample_observable_unit(2, rng)).vec;
    const Eigen::Matrix3d m = a * a.transpose();
    sum += m;
    sum2 += m.cwiseProduct(m);
  }
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) {
      const double mean = sum(j, k) / n;
      const double se = std::sqrt((sum2(j, k) / n - mean * mean) / n);
      const double target = j == k ? 1.0 / 3 : 0.0;
      CHECK(std::abs(mean - target) < 3 * se);
    }
  }
}
