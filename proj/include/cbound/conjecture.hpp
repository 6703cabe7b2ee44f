#pragma once

// Numerical search for the largest value of
//     R(A, B) = ||[A,B]||_rho^2 / (||A||_rho^2 ||B||_rho^2)
// at fixed rho, compared against the conjectured sharp constant
// (lambda_min + lambda_second) / (lambda_min lambda_second) and the proven
// constant 2 lambda_max / lambda_min^2.
//
// For fixed B the maximand is a generalized Rayleigh quotient in vec(A):
// numerator L_B^dag W L_B, denominator W, with L_B = B^T (x) I - I (x) B and
// W = rho^T (x) I (column-stacking). Each half-step takes the top generalized
// eigenvector, which is the global optimum for that block, so R never
// decreases along the iteration.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cbound/quantum_state.hpp"

namespace cbound {

enum class OptimizationMode {
  complex,    // A, B range over all complex matrices
  hermitian,  // A, B restricted to Hermitian matrices
};

const char* to_string(OptimizationMode mode);
OptimizationMode parse_mode(const std::string& text);

struct OptimizerOptions {
  int restarts = 8;
  int max_iters = 500;
  double tol = 1e-10;  // relative gain per full sweep
  OptimizationMode mode = OptimizationMode::complex;
  std::uint64_t seed = 42;
  // Adds one start at the analytic equality witness.
  bool seed_with_witness = true;
};

struct OptimizationResult {
  long dim = 0;
  RealVectord spectrum;
  double achieved_ratio = 0;
  double conjectured_constant = 0;
  double loose_constant = 0;
  ComplexMatrixd witness_a;
  ComplexMatrixd witness_b;
  int iterations = 0;     // sweeps taken by the winning start
  int restarts_used = 0;  // starts that ran to completion
  bool converged = false;
  OptimizationMode mode = OptimizationMode::complex;

  // Best ratio among random starts only (the witness start excluded).
  double best_random_ratio = 0;
  // Ratio after every half-step of the winning start.
  std::vector<double> trace;
  // Every half-step of every start was non-decreasing up to 1e-12 relative.
  bool monotone = true;
  std::vector<std::string> diagnostics;

  double relative_deviation() const { return achieved_ratio / conjectured_constant - 1.0; }
  /// Exceeds the conjectured constant by more than 1e-6 relative.
  bool is_counterexample() const { return achieved_ratio > conjectured_constant * (1.0 + 1e-6); }
  /// Exceeds the proven constant by more than 1e-9 relative, i.e. a bug.
  bool exceeds_proven_ceiling() const { return achieved_ratio > loose_constant * (1.0 + 1e-9); }
};

/// (lambda_min + lambda_second) / (lambda_min lambda_second); +inf when lambda_min = 0.
double conjectured_constant(const DensityMatrixd& rho);
/// Same, from an ascending spectrum.
double conjectured_constant(const RealVectord& ascending);

/// 2 lambda_max / lambda_min^2; +inf when lambda_min = 0.
double loose_constant(const DensityMatrixd& rho);
double loose_constant(const RealVectord& ascending);

/// A = l2 |1><1| - l1 |2><2|,  B = |1><2| + |2><1| on the two lowest
/// eigenvectors of rho. Requires lambda_min > 0.
std::pair<Observabled, Observabled> equality_witness(const DensityMatrixd& rho);

/// R(A, B). Both semi-norms must exceed 1e-14.
double ratio(const ComplexMatrixd& a, const ComplexMatrixd& b, const DensityMatrixd& rho);

/// Multistart alternating maximization of R. Requires lambda_min > 0.
OptimizationResult maximize_ratio(const DensityMatrixd& rho, const OptimizerOptions& opts = {});

}  // namespace cbound
