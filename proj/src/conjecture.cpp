#include "cbound/conjecture.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "cbound/errors.hpp"
#include "cbound/matrix_core.hpp"
#include "cbound/sampling.hpp"

namespace cbound {

namespace {

constexpr std::uint64_t kOptimizerStream = 0x636f6e6a;  // "conj"
constexpr double kMonotoneSlack = 1e-12;

ComplexMatrixd vec_to_matrix(const ComplexVectord& v, Eigen::Index d) {
  return Eigen::Map<const ComplexMatrixd>(v.data(), d, d);
}

ComplexMatrixd kron(const ComplexMatrixd& x, const ComplexMatrixd& y) {
  ComplexMatrixd out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j) out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
  return out;
}

// Columns are vec(G_k) for a Frobenius-orthonormal basis of Hermitian matrices.
ComplexMatrixd hermitian_basis(Eigen::Index d) {
  const Eigen::Index n = d * d;
  ComplexMatrixd t = ComplexMatrixd::Zero(n, n);
  const double h = 1.0 / std::sqrt(2.0);
  Eigen::Index k = 0;
  auto at = [d](Eigen::Index i, Eigen::Index j) { return i + d * j; };
  for (Eigen::Index i = 0; i < d; ++i) t(at(i, i), k++) = 1.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      t(at(i, j), k) = h;
      t(at(j, i), k) = h;
      ++k;
      t(at(i, j), k) = std::complex<double>(0, h);
      t(at(j, i), k) = std::complex<double>(0, -h);
      ++k;
    }
  }
  return t;
}

// Half-step machinery for one weight rho: given the fixed partner X, return
// the matrix Y maximizing ||[Y, X]||_rho^2 / ||Y||_rho^2, and that maximum.
class BlockSolver {
 public:
  BlockSolver(const DensityMatrixd& rho, OptimizationMode mode) : d_(rho.dim()), mode_(mode) {
    const ComplexMatrixd id = ComplexMatrixd::Identity(d_, d_);
    weight_ = kron(rho.matrix().transpose(), id);
    if (mode_ == OptimizationMode::hermitian) {
      basis_ = hermitian_basis(d_);
      weight_real_ = (basis_.adjoint() * weight_ * basis_).real();
      weight_real_ = (weight_real_ + weight_real_.transpose()) / 2.0;
    }
  }

  struct Step {
    ComplexMatrixd matrix;
    double eigenvalue;
  };

  std::optional<Step> best_partner(const ComplexMatrixd& fixed, std::string& diagnostic) const {
    const ComplexMatrixd id = ComplexMatrixd::Identity(d_, d_);
    // vec(Y X - X Y) = (X^T (x) I - I (x) X) vec(Y)
    const ComplexMatrixd lift = kron(fixed.transpose(), id) - kron(id, fixed);
    ComplexMatrixd numer = lift.adjoint() * weight_ * lift;
    numer = (numer + numer.adjoint()) / 2.0;

    if (mode_ == OptimizationMode::complex) {
      Eigen::GeneralizedSelfAdjointEigenSolver<ComplexMatrixd> ges(numer, weight_);
      if (ges.info() != Eigen::Success) {
        diagnostic = "generalized eigensolver failed (complex mode)";
        return std::nullopt;
      }
      const Eigen::Index top = ges.eigenvalues().size() - 1;
      return Step{vec_to_matrix(ges.eigenvectors().col(top), d_), ges.eigenvalues()(top)};
    }
    Eigen::MatrixXd numer_real = (basis_.adjoint() * numer * basis_).real();
    numer_real = (numer_real + numer_real.transpose()) / 2.0;
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(numer_real, weight_real_);
    if (ges.info() != Eigen::Success) {
      diagnostic = "generalized eigensolver failed (hermitian mode)";
      return std::nullopt;
    }
    const Eigen::Index top = ges.eigenvalues().size() - 1;
    const ComplexVectord coeffs = ges.eigenvectors().col(top).cast<std::complex<double>>();
    return Step{vec_to_matrix(basis_ * coeffs, d_), ges.eigenvalues()(top)};
  }

 private:
  Eigen::Index d_;
  OptimizationMode mode_;
  ComplexMatrixd weight_;
  ComplexMatrixd basis_;
  Eigen::MatrixXd weight_real_;
};

struct StartOutcome {
  ComplexMatrixd a;
  ComplexMatrixd b;
  double ratio = 0;
  int iterations = 0;
  bool converged = false;
  bool monotone = true;
  std::vector<double> trace;
};

ComplexMatrixd normalized(const ComplexMatrixd& m, const DensityMatrixd& rho) {
  const double n = weighted_norm_sq(m, rho);
  return m / std::sqrt(n);
}

// Phase (complex mode) or sign (Hermitian mode) that aligns `prev` with `next`
// in the rho inner product, so that their difference is meaningful.
std::complex<double> alignment(const ComplexMatrixd& prev, const ComplexMatrixd& next, const DensityMatrixd& rho,
                               OptimizationMode mode) {
  const std::complex<double> overlap = weighted_inner_product(prev, next, rho);
  if (mode == OptimizationMode::hermitian) return overlap.real() < 0 ? -1.0 : 1.0;
  const double mag = std::abs(overlap);
  return mag > 0 ? overlap / mag : 1.0;
}

std::optional<StartOutcome> run_start(const BlockSolver& solver, const DensityMatrixd& rho, ComplexMatrixd b,
                                      const OptimizerOptions& opts, std::string& diagnostic) {
  StartOutcome out;
  b = normalized(b, rho);
  ComplexMatrixd a;
  ComplexMatrixd b_prev;
  double previous = -std::numeric_limits<double>::infinity();
  // Extrapolation weight for the B iterate. Plain alternation converges
  // linearly and crawls when the top two block eigenvalues are close; an
  // extrapolated B is kept only if its A-step beats the plain iterate.
  double beta = 0.5;
  std::optional<BlockSolver::Step> cached_a;
  for (int it = 1; it <= opts.max_iters; ++it) {
    auto step_a = cached_a ? std::move(cached_a) : solver.best_partner(b, diagnostic);
    cached_a.reset();
    if (!step_a) return std::nullopt;
    a = normalized(step_a->matrix, rho);
    const double after_a = step_a->eigenvalue;  // ||b||_rho = 1

    auto step_b = solver.best_partner(a, diagnostic);
    if (!step_b) return std::nullopt;
    b_prev = b;
    b = normalized(step_b->matrix, rho);
    const double after_b = step_b->eigenvalue;

    if (!std::isfinite(after_a) || !std::isfinite(after_b)) {
      diagnostic = "non-finite ratio during iteration " + std::to_string(it);
      return std::nullopt;
    }
    const double scale = std::max({1.0, std::abs(after_b), std::abs(previous)});
    if (std::isfinite(previous) && after_a < previous - kMonotoneSlack * scale) out.monotone = false;
    if (after_b < after_a - kMonotoneSlack * scale) out.monotone = false;
    out.trace.push_back(after_a);
    out.trace.push_back(after_b);
    out.iterations = it;

    if (std::isfinite(previous) && after_b > 0 && (after_b - previous) / after_b < opts.tol) {
      out.converged = true;
      break;
    }
    if (after_b <= 0 && std::isfinite(previous) && previous <= 0) {
      // Degenerate start (e.g. a multiple of the identity): nothing to climb.
      out.converged = true;
      break;
    }
    previous = after_b;

    if (it > 1) {
      const ComplexMatrixd delta = b - alignment(b_prev, b, rho, opts.mode) * b_prev;
      const ComplexMatrixd trial = b + beta * delta;
      const double n = weighted_norm_sq(trial, rho);
      if (n > 1e-14) {
        const ComplexMatrixd b_ext = trial / std::sqrt(n);
        std::string ignored;
        auto probe = solver.best_partner(b_ext, ignored);
        if (probe && probe->eigenvalue > after_b) {
          b = b_ext;
          cached_a = std::move(probe);
          beta = std::min(2.0 * beta, 64.0);
        } else {
          beta = std::max(0.5 * beta, 0.125);
        }
      }
    }
  }
  // The last iteration may have swapped in an extrapolated B whose best
  // partner is already known.
  if (cached_a) a = normalized(cached_a->matrix, rho);
  out.a = a;
  out.b = b;
  out.ratio = ratio(a, b, rho);
  return out;
}

}  // namespace

const char* to_string(OptimizationMode mode) {
  return mode == OptimizationMode::complex ? "complex" : "hermitian";
}

OptimizationMode parse_mode(const std::string& text) {
  if (text == "complex") return OptimizationMode::complex;
  if (text == "hermitian") return OptimizationMode::hermitian;
  throw InvalidInput("unknown optimization mode '" + text + "' (expected complex or hermitian)");
}

double conjectured_constant(const RealVectord& ascending) {
  if (ascending.size() < 2) throw InvalidInput("conjectured_constant: need at least 2 eigenvalues");
  const double lm = ascending(0);
  const double ls = ascending(1);
  if (!(lm > 0)) return std::numeric_limits<double>::infinity();
  return (lm + ls) / (lm * ls);
}

double conjectured_constant(const DensityMatrixd& rho) { return conjectured_constant(rho.spectrum()); }

double loose_constant(const RealVectord& ascending) {
  if (ascending.size() < 1) throw InvalidInput("loose_constant: empty spectrum");
  const double lm = ascending(0);
  if (!(lm > 0)) return std::numeric_limits<double>::infinity();
  return 2.0 * ascending(ascending.size() - 1) / (lm * lm);
}

double loose_constant(const DensityMatrixd& rho) { return loose_constant(rho.spectrum()); }

std::pair<Observabled, Observabled> equality_witness(const DensityMatrixd& rho) {
  if (rho.dim() < 2) throw InvalidInput("equality_witness: dim must be >= 2");
  if (!(rho.lambda_min() > 0)) throw InvalidInput("equality_witness: lambda_min = 0, witness undefined");
  const double l1 = rho.spectrum()(0);
  const double l2 = rho.spectrum()(1);
  const ComplexVectord v1 = rho.eigenvectors().col(0);
  const ComplexVectord v2 = rho.eigenvectors().col(1);
  const ComplexMatrixd a = l2 * v1 * v1.adjoint() - l1 * v2 * v2.adjoint();
  const ComplexMatrixd b = v1 * v2.adjoint() + v2 * v1.adjoint();
  return {Observabled(a), Observabled(b)};
}

double ratio(const ComplexMatrixd& a, const ComplexMatrixd& b, const DensityMatrixd& rho) {
  const double na = weighted_norm_sq(a, rho);
  const double nb = weighted_norm_sq(b, rho);
  if (!(na > 1e-14) || !(nb > 1e-14)) throw InvalidInput("ratio: semi-norm of an argument vanishes");
  return weighted_norm_sq(commutator(a, b), rho) / (na * nb);
}

OptimizationResult maximize_ratio(const DensityMatrixd& rho, const OptimizerOptions& opts) {
  if (rho.dim() < 2) throw InvalidInput("maximize_ratio: dim must be >= 2");
  if (!(rho.lambda_min() > 0)) throw InvalidInput("maximize_ratio: lambda_min = 0, the supremum is unbounded");
  if (opts.restarts < 0 || opts.max_iters < 1 || !(opts.tol > 0)) throw InvalidInput("maximize_ratio: bad options");

  const Eigen::Index d = rho.dim();
  const BlockSolver solver(rho, opts.mode);

  OptimizationResult result;
  result.dim = static_cast<long>(d);
  result.spectrum = rho.spectrum();
  result.conjectured_constant = conjectured_constant(rho);
  result.loose_constant = loose_constant(rho);
  result.mode = opts.mode;

  std::optional<StartOutcome> best;
  result.best_random_ratio = 0;
  const int starts = opts.restarts + (opts.seed_with_witness ? 1 : 0);
  for (int s = 0; s < starts; ++s) {
    const bool witness_start = s == opts.restarts;
    ComplexMatrixd b0;
    if (witness_start) {
      b0 = equality_witness(rho).second.matrix();
    } else {
      Rng rng = make_rng(opts.seed, kOptimizerStream, static_cast<std::uint64_t>(s));
      b0 = opts.mode == OptimizationMode::complex ? random_ginibre<double>(d, d, rng) : random_hermitian<double>(d, rng);
    }
    std::string diagnostic;
    auto outcome = run_start(solver, rho, b0, opts, diagnostic);
    if (!outcome) {
      result.diagnostics.push_back("start " + std::to_string(s) + " discarded: " + diagnostic);
      continue;
    }
    ++result.restarts_used;
    result.monotone = result.monotone && outcome->monotone;
    if (!witness_start) result.best_random_ratio = std::max(result.best_random_ratio, outcome->ratio);
    // Strictly greater: ties keep the lower start index.
    if (!best || outcome->ratio > best->ratio) best = std::move(outcome);
  }
  if (!best) throw ConvergenceError("maximize_ratio: every start failed");

  result.achieved_ratio = best->ratio;
  result.witness_a = best->a;
  result.witness_b = best->b;
  result.iterations = best->iterations;
  result.converged = best->converged;
  result.trace = std::move(best->trace);
  return result;
}

}  // namespace cbound
