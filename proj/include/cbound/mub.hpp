#pragma once

// Mutually unbiased observable pairs built from discrete Fourier phases, and
// the bound averages over their eigenvalue spectra.

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "cbound/quantum_state.hpp"
#include "cbound/sphere_averaging.hpp"

namespace cbound {

/// A = diag(spectrum_a) in the computational basis, B = sum_k b_k |b_k><b_k|
/// with <j|b_k> = exp(i phases(j,k)) / sqrt(dim).
struct MUBPair {
  long dim = 0;
  Eigen::MatrixXd phases;
  RealVectord spectrum_a;
  RealVectord spectrum_b;

  /// Unitary whose k-th column is |b_k>.
  ComplexMatrixd basis_b() const;
  Observabled observable_a() const;
  Observabled observable_b() const;
};

/// Fourier pair: phases(j,k) = 2 pi j k / dim. With `require_unit` the two
/// spectra must have unit Euclidean norm.
MUBPair fourier_mub_pair(long dim, const RealVectord& a, const RealVectord& b, bool require_unit = true);

/// max_{j,k} | |<j|b_k>|^2 - 1/dim |.
double unbiasedness_defect(const MUBPair& pair);

struct RobertsonSchrodinger {
  double robertson;
  double schrodinger;
};

/// Both bounds for the pair under the diagonal state diag(lambda), computed
/// through the generic matrix path.
RobertsonSchrodinger mub_vanishing_check(const MUBPair& pair, const RealVectord& lambda);

/// ||[A,B]||_rho^2 evaluated from the double phase sum; rho = diag(lambda).
double mub_commutator_norm(const MUBPair& pair, const RealVectord& lambda);

/// Luo-Park average over spectra a, b on the unit sphere:
/// (1 - sum lambda^2) ((sum sqrt(lambda))^2 - 1) / d^3.
double mub_lp_average(const RealVectord& lambda);

struct MubBoundTwoAverage {
  double value;
  bool degenerate;  // lambda_min + lambda_second == 0
};

/// lambda_min lambda_second / (lambda_min + lambda_second) * 2(d-1)/d^3.
MubBoundTwoAverage mub_b2_average(const RealVectord& lambda);

/// 2(d-1)/d^3.
double mub_commutator_norm_average(long dim);

struct MubMCAverage {
  long dim = 0;
  MCEstimate commutator_norm;  // ||[A,B]||_rho^2
  MCEstimate lp_factor_a;      // Tr(A sqrt(rho) A sqrt(rho)) - <A>^2
  MCEstimate lp_factor_b;      // same for B
  MCEstimate lp_product;       // product of the two factors
  // Closed-form targets.
  double commutator_norm_target = 0;
  double lp_factor_a_target = 0;
  double lp_factor_b_target = 0;
  double lp_product_target = 0;
};

/// Samples a and b independently and uniformly on S_{d-1} with the Fourier
/// phases held fixed. `phases` overrides the Fourier table when non-empty.
MubMCAverage mc_mub_average(long dim, const RealVectord& lambda, long samples, const MonteCarloOptions& opts = {},
                            const Eigen::MatrixXd& phases = {});

/// Luo-Park bound for a = x, b = y and a state of purity P whose Bloch
/// vector makes angle theta with a inside the a-b plane:
/// q^2 (1 + (q-1) cos^2 theta)(1 + (q-1) sin^2 theta),  q = sqrt(2(1-P)).
double qubit_mub_theta_lp(double purity, double theta);

/// Qubit spectrum ((1-r)/2, (1+r)/2) with r = sqrt(2P - 1).
RealVectord qubit_spectrum_from_purity(double purity);

struct Fig2Row {
  double purity;
  double luo_park;
  double bound2;
};

std::vector<Fig2Row> fig2_table(long points);

inline constexpr const char* kFig2Header = "purity,luo_park_mub_avg,bound2_mub_avg";

void write_fig2_csv(std::ostream& out, const std::vector<Fig2Row>& rows);

}  // namespace cbound
