#pragma once

// Averages of the qubit bounds over pairs of unit observables drawn
// uniformly from the sphere: closed forms as functions of purity, a
// Monte-Carlo cross-check, crossover purities and the figure table.

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cbound/quantum_state.hpp"

namespace cbound {

struct MCEstimate {
  double mean = 0;
  double std_error = 0;  // sample standard deviation / sqrt(samples)
  long samples = 0;
};

/// Distance from target in units of the standard error. A zero standard
/// error yields 0 if the mean equals the target to 1e-12, +inf otherwise.
double z_score(const MCEstimate& e, double target);

/// Welford accumulator with an order-dependent but deterministic merge.
class RunningStats {
 public:
  void add(double x);
  void merge(const RunningStats& other);
  MCEstimate estimate() const;
  long count() const { return count_; }

 private:
  long count_ = 0;
  double mean_ = 0;
  double m2_ = 0;
};

struct AveragedBounds {
  double purity = 0;
  double robertson = 0;
  double schrodinger = 0;
  double luo_park = 0;
  double bound1 = 0;
  double bound2 = 0;
};

struct QubitMCAverage {
  double purity = 0;
  MCEstimate robertson;
  MCEstimate schrodinger;
  MCEstimate luo_park;
  MCEstimate bound1;
  MCEstimate bound2;
};

struct MonteCarloOptions {
  std::uint64_t seed = 42;
  unsigned workers = 1;
  // Direction of the state's Bloch vector; its length is fixed by the purity.
  Vector3d state_direction = Vector3d::UnitZ();
};

/// Samples per independent RNG stream. Fixed so that results do not depend
/// on the worker count.
inline constexpr long kSamplesPerTask = 1L << 14;

AveragedBounds averaged_bounds_qubit(double purity);

QubitMCAverage monte_carlo_qubit_average(double purity, long samples, const MonteCarloOptions& opts = {});

struct Crossovers {
  double robertson;    // <B2> = <B_R>
  double schrodinger;  // <B2> = <B_S>
};

/// Roots on (1/2, 1) found by bisection to 1e-12.
Crossovers crossover_purities();

struct MomentTable {
  long dim = 0;
  std::vector<MCEstimate> entries;  // row-major dim x dim estimates of <x_j x_k>

  const MCEstimate& at(long j, long k) const { return entries[static_cast<std::size_t>(j * dim + k)]; }
};

MomentTable sphere_moment_check(long dim, long samples, const MonteCarloOptions& opts = {});

/// Averaged bounds on a uniform purity grid over [1/2, 1].
std::vector<AveragedBounds> fig1_table(long points);

inline constexpr const char* kFig1Header = "purity,robertson,schrodinger,luo_park,bound1,bound2";

void write_fig1_csv(std::ostream& out, const std::vector<AveragedBounds>& rows);

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double x);

}  // namespace cbound
