#include "cbound/mub.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "cbound/bounds.hpp"
#include "cbound/errors.hpp"
#include "cbound/parallel.hpp"
#include "cbound/sampling.hpp"

namespace cbound {

namespace {

constexpr std::uint64_t kMubStream = 0x6d756261;  // "muba"
constexpr double kUnitTolerance = 1e-10;

void require_spectrum(const RealVectord& lambda, const char* what) {
  if (lambda.size() < 2) throw InvalidInput(std::string(what) + ": spectrum needs at least 2 entries");
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (!(lambda(i) >= 0)) throw InvalidInput(std::string(what) + ": spectrum has a negative entry");
  }
  if (std::abs(lambda.sum() - 1.0) > kTraceTolerance) {
    throw InvalidInput(std::string(what) + ": spectrum does not sum to 1");
  }
}

ComplexMatrixd phase_unitary(const Eigen::MatrixXd& phases) {
  const Eigen::Index d = phases.rows();
  ComplexMatrixd u(d, d);
  const double norm = 1.0 / std::sqrt(double(d));
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index k = 0; k < d; ++k) u(j, k) = std::polar(norm, phases(j, k));
  return u;
}

Eigen::MatrixXd fourier_phases(long dim) {
  Eigen::MatrixXd phases(dim, dim);
  for (long j = 0; j < dim; ++j)
    for (long k = 0; k < dim; ++k) phases(j, k) = 2.0 * std::numbers::pi * double((j * k) % dim) / double(dim);
  return phases;
}

}  // namespace

ComplexMatrixd MUBPair::basis_b() const { return phase_unitary(phases); }

Observabled MUBPair::observable_a() const {
  return Observabled(ComplexMatrixd(spectrum_a.cast<std::complex<double>>().asDiagonal()));
}

Observabled MUBPair::observable_b() const {
  const ComplexMatrixd u = basis_b();
  return Observabled(u * spectrum_b.cast<std::complex<double>>().asDiagonal() * u.adjoint());
}

MUBPair fourier_mub_pair(long dim, const RealVectord& a, const RealVectord& b, bool require_unit) {
  if (dim < 2) throw InvalidInput("fourier_mub_pair: dim must be >= 2");
  if (a.size() != dim) throw DimensionMismatch("fourier_mub_pair: spectrum a", static_cast<long>(a.size()), dim);
  if (b.size() != dim) throw DimensionMismatch("fourier_mub_pair: spectrum b", static_cast<long>(b.size()), dim);
  if (require_unit && (std::abs(a.norm() - 1.0) > kUnitTolerance || std::abs(b.norm() - 1.0) > kUnitTolerance)) {
    throw InvalidInput("fourier_mub_pair: spectra must have unit Euclidean norm");
  }
  MUBPair pair;
  pair.dim = dim;
  pair.phases = fourier_phases(dim);
  pair.spectrum_a = a;
  pair.spectrum_b = b;
  return pair;
}

double unbiasedness_defect(const MUBPair& pair) {
  const ComplexMatrixd u = pair.basis_b();
  return (u.cwiseAbs2().array() - 1.0 / double(pair.dim)).abs().maxCoeff();
}

RobertsonSchrodinger mub_vanishing_check(const MUBPair& pair, const RealVectord& lambda) {
  require_spectrum(lambda, "mub_vanishing_check");
  if (lambda.size() != pair.dim) {
    throw DimensionMismatch("mub_vanishing_check", static_cast<long>(lambda.size()), pair.dim);
  }
  const auto rho = DensityMatrixd::diagonal(lambda);
  const Observabled a = pair.observable_a();
  const Observabled b = pair.observable_b();
  return {bound_robertson(a, b, rho), bound_schrodinger(a, b, rho)};
}

double mub_commutator_norm(const MUBPair& pair, const RealVectord& lambda) {
  const long d = pair.dim;
  if (lambda.size() != d) throw DimensionMismatch("mub_commutator_norm", static_cast<long>(lambda.size()), d);
  const auto& th = pair.phases;
  const auto& a = pair.spectrum_a;
  const auto& b = pair.spectrum_b;

  // (1/d^2) sum_{j,k} lambda_k a_j (a_j - 2 a_k) sum_{l,m} b_l b_m e^{-i(th_kl - th_jl)} e^{i(th_km - th_jm)}
  //   + (1/d) sum_j lambda_j a_j^2 sum_l b_l^2
  std::complex<double> cross = 0;
  for (long j = 0; j < d; ++j) {
    for (long k = 0; k < d; ++k) {
      std::complex<double> inner = 0;
      for (long l = 0; l < d; ++l) {
        for (long m = 0; m < d; ++m) {
          const double angle = -(th(k, l) - th(j, l)) + (th(k, m) - th(j, m));
          inner += b(l) * b(m) * std::polar(1.0, angle);
        }
      }
      cross += lambda(k) * a(j) * (a(j) - 2.0 * a(k)) * inner;
    }
  }
  double diag = 0;
  for (long j = 0; j < d; ++j) diag += lambda(j) * a(j) * a(j);
  const double value = cross.real() / double(d * d) + diag * b.squaredNorm() / double(d);
  return value;
}

double mub_lp_average(const RealVectord& lambda) {
  require_spectrum(lambda, "mub_lp_average");
  const double d = double(lambda.size());
  const double root_sum = lambda.cwiseSqrt().sum();
  return (1.0 - lambda.squaredNorm()) * (root_sum * root_sum - 1.0) / (d * d * d);
}

double mub_commutator_norm_average(long dim) {
  if (dim < 2) throw InvalidInput("mub_commutator_norm_average: dim must be >= 2");
  const double d = double(dim);
  return 2.0 * (d - 1.0) / (d * d * d);
}

MubBoundTwoAverage mub_b2_average(const RealVectord& lambda) {
  require_spectrum(lambda, "mub_b2_average");
  RealVectord sorted = lambda;
  std::sort(sorted.data(), sorted.data() + sorted.size());
  const double lm = sorted(0);
  const double ls = sorted(1);
  if (!(lm + ls > 0)) return {0.0, true};
  return {lm * ls / (lm + ls) * mub_commutator_norm_average(static_cast<long>(lambda.size())), false};
}

MubMCAverage mc_mub_average(long dim, const RealVectord& lambda, long samples, const MonteCarloOptions& opts,
                            const Eigen::MatrixXd& phases) {
  if (dim < 2) throw InvalidInput("mc_mub_average: dim must be >= 2");
  if (lambda.size() != dim) throw DimensionMismatch("mc_mub_average", static_cast<long>(lambda.size()), dim);
  require_spectrum(lambda, "mc_mub_average");
  if (samples < 10000) throw InvalidInput("mc_mub_average: need at least 10000 samples");
  const Eigen::MatrixXd table = phases.size() == 0 ? fourier_phases(dim) : phases;
  if (table.rows() != dim || table.cols() != dim) {
    throw DimensionMismatch("mc_mub_average: phase table", static_cast<long>(table.rows()), dim);
  }
  const ComplexMatrixd u = phase_unitary(table);
  const RealVectord root = lambda.cwiseSqrt();

  const long tasks = (samples + kSamplesPerTask - 1) / kSamplesPerTask;
  std::vector<std::array<RunningStats, 4>> partial(static_cast<std::size_t>(tasks));
  parallel_for(static_cast<std::size_t>(tasks), opts.workers, [&](std::size_t t) {
    Rng rng = make_rng(opts.seed, kMubStream ^ static_cast<std::uint64_t>(dim), t);
    auto& acc = partial[t];
    const long n = std::min(kSamplesPerTask, samples - static_cast<long>(t) * kSamplesPerTask);
    for (long i = 0; i < n; ++i) {
      const RealVectord a = random_unit_vector<double>(dim, rng);
      const RealVectord b = random_unit_vector<double>(dim, rng);
      const ComplexMatrixd bm = u * b.cast<std::complex<double>>().asDiagonal() * u.adjoint();
      const Eigen::MatrixXd b2 = bm.cwiseAbs2();

      // [A,B]_jk = (a_j - a_k) B_jk;  ||C||_rho^2 = sum_jk |C_jk|^2 lambda_k
      double comm = 0;
      for (long j = 0; j < dim; ++j)
        for (long k = 0; k < dim; ++k) comm += (a(j) - a(k)) * (a(j) - a(k)) * b2(j, k) * lambda(k);

      const double mean_a = a.dot(lambda);
      const double fa = a.cwiseProduct(a).dot(lambda) - mean_a * mean_a;
      double mean_b = 0;
      for (long j = 0; j < dim; ++j) mean_b += lambda(j) * bm(j, j).real();
      const double fb = root.dot(b2 * root) - mean_b * mean_b;

      acc[0].add(comm);
      acc[1].add(fa);
      acc[2].add(fb);
      acc[3].add(fa * fb);
    }
  });
  std::array<RunningStats, 4> total;
  for (const auto& p : partial)
    for (std::size_t k = 0; k < 4; ++k) total[k].merge(p[k]);

  MubMCAverage out;
  out.dim = dim;
  out.commutator_norm = total[0].estimate();
  out.lp_factor_a = total[1].estimate();
  out.lp_factor_b = total[2].estimate();
  out.lp_product = total[3].estimate();
  const double d = double(dim);
  const double root_sum = root.sum();
  out.commutator_norm_target = mub_commutator_norm_average(dim);
  out.lp_factor_a_target = (1.0 - lambda.squaredNorm()) / d;
  out.lp_factor_b_target = (root_sum * root_sum - 1.0) / (d * d);
  out.lp_product_target = mub_lp_average(lambda);
  return out;
}

double qubit_mub_theta_lp(double purity, double theta) {
  if (!(purity >= 0.5 && purity <= 1.0)) throw InvalidInput("qubit_mub_theta_lp: purity must lie in [1/2, 1]");
  const double q = std::sqrt(2.0 * (1.0 - purity));
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return q * q * (1.0 + (q - 1.0) * c * c) * (1.0 + (q - 1.0) * s * s);
}

RealVectord qubit_spectrum_from_purity(double purity) {
  if (!(purity >= 0.5 && purity <= 1.0)) throw InvalidInput("qubit_spectrum_from_purity: purity must lie in [1/2, 1]");
  const double r = std::sqrt(std::max(0.0, 2.0 * purity - 1.0));
  RealVectord lambda(2);
  lambda << (1.0 - r) / 2.0, (1.0 + r) / 2.0;
  return lambda;
}

std::vector<Fig2Row> fig2_table(long points) {
  if (points < 2) throw InvalidInput("fig2_table: need at least 2 points");
  std::vector<Fig2Row> rows;
  rows.reserve(static_cast<std::size_t>(points));
  for (long i = 0; i < points; ++i) {
    const double p = i == points - 1 ? 1.0 : 0.5 + 0.5 * double(i) / double(points - 1);
    const RealVectord lambda = qubit_spectrum_from_purity(p);
    rows.push_back({p, mub_lp_average(lambda), mub_b2_average(lambda).value});
  }
  return rows;
}

void write_fig2_csv(std::ostream& out, const std::vector<Fig2Row>& rows) {
  out << kFig2Header << '\n';
  for (const auto& r : rows) {
    out << format_double(r.purity) << ',' << format_double(r.luo_park) << ',' << format_double(r.bound2) << '\n';
  }
}

}  // namespace cbound
