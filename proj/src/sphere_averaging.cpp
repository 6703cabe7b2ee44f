#include "cbound/sphere_averaging.hpp"

#include <boost/math/tools/roots.hpp>

#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <system_error>

#include "cbound/bounds.hpp"
#include "cbound/errors.hpp"
#include "cbound/parallel.hpp"
#include "cbound/sampling.hpp"

namespace cbound {

namespace {

constexpr std::uint64_t kQubitStream = 0x71756269;   // "qubi"
constexpr std::uint64_t kMomentStream = 0x6d6f6d6e;  // "momn"

void require_purity(double purity, const char* what) {
  if (!(purity >= 0.5 && purity <= 1.0)) {
    throw InvalidInput(std::string(what) + ": purity must lie in [1/2, 1], got " + std::to_string(purity));
  }
}

long task_count(long samples) { return (samples + kSamplesPerTask - 1) / kSamplesPerTask; }

long task_size(long samples, long task) { return std::min(kSamplesPerTask, samples - task * kSamplesPerTask); }

}  // namespace

double z_score(const MCEstimate& e, double target) {
  const double diff = e.mean - target;
  if (e.std_error > 0) return diff / e.std_error;
  return std::abs(diff) <= 1e-12 ? 0.0 : std::numeric_limits<double>::infinity();
}

void RunningStats::add(double x) {
  ++count_;
  const double delta = x - mean_;
  mean_ += delta / double(count_);
  m2_ += delta * (x - mean_);
}

void RunningStats::merge(const RunningStats& other) {
  if (other.count_ == 0) return;
  if (count_ == 0) {
    *this = other;
    return;
  }
  const long n = count_ + other.count_;
  const double delta = other.mean_ - mean_;
  mean_ += delta * double(other.count_) / double(n);
  m2_ += other.m2_ + delta * delta * double(count_) * double(other.count_) / double(n);
  count_ = n;
}

MCEstimate RunningStats::estimate() const {
  MCEstimate e;
  e.mean = mean_;
  e.samples = count_;
  if (count_ >= 2) {
    const double var = std::max(0.0, m2_ / double(count_ - 1));
    e.std_error = std::sqrt(var / double(count_));
  }
  return e;
}

AveragedBounds averaged_bounds_qubit(double purity) {
  require_purity(purity, "averaged_bounds_qubit");
  const double p = purity;
  const double r = std::sqrt(std::max(0.0, 2.0 * p - 1.0));
  AveragedBounds out;
  out.purity = p;
  out.robertson = 2.0 / 9.0 * (2.0 * p - 1.0);
  out.schrodinger = out.robertson + 2.0 / 9.0 * (2.0 * p * p - 4.0 * p + 3.0);
  const double lp = (1.0 - p) + std::sqrt(2.0 * (1.0 - p));
  out.luo_park = out.robertson + 4.0 / 9.0 * lp * lp;
  out.bound1 = 4.0 / 3.0 * (p - r) / (1.0 + r);
  out.bound2 = 4.0 / 3.0 * (1.0 - p);
  return out;
}

QubitMCAverage monte_carlo_qubit_average(double purity, long samples, const MonteCarloOptions& opts) {
  require_purity(purity, "monte_carlo_qubit_average");
  if (samples < 1000) throw InvalidInput("monte_carlo_qubit_average: need at least 1000 samples");
  const double norm = opts.state_direction.norm();
  if (!(norm > 0)) throw InvalidInput("monte_carlo_qubit_average: state direction must be nonzero");
  const Vector3d c = opts.state_direction / norm * std::sqrt(std::max(0.0, 2.0 * purity - 1.0));

  const long tasks = task_count(samples);
  std::vector<std::array<RunningStats, 5>> partial(static_cast<std::size_t>(tasks));
  parallel_for(static_cast<std::size_t>(tasks), opts.workers, [&](std::size_t t) {
    Rng rng = make_rng(opts.seed, kQubitStream, t);
    auto& acc = partial[t];
    const long n = task_size(samples, static_cast<long>(t));
    for (long i = 0; i < n; ++i) {
      const Vector3d a = random_unit_vector3<double>(rng);
      const Vector3d b = random_unit_vector3<double>(rng);
      const QubitBounds q = qubit_bounds_unchecked(a, b, c);
      acc[0].add(q.robertson);
      acc[1].add(q.schrodinger);
      acc[2].add(q.luo_park);
      acc[3].add(q.bound1);
      acc[4].add(q.bound2);
    }
  });
  std::array<RunningStats, 5> total;
  for (const auto& p : partial)
    for (std::size_t k = 0; k < 5; ++k) total[k].merge(p[k]);

  QubitMCAverage out;
  out.purity = purity;
  out.robertson = total[0].estimate();
  out.schrodinger = total[1].estimate();
  out.luo_park = total[2].estimate();
  out.bound1 = total[3].estimate();
  out.bound2 = total[4].estimate();
  return out;
}

Crossovers crossover_purities() {
  auto root = [](auto gap) {
    auto done = [](double lo, double hi) { return hi - lo <= 1e-13; };
    // Both gaps are positive at P = 1/2 and negative at P = 1.
    const auto bracket = boost::math::tools::bisect(gap, 0.5, 1.0, done);
    return 0.5 * (bracket.first + bracket.second);
  };
  Crossovers out;
  out.robertson = root([](double p) {
    const auto avg = averaged_bounds_qubit(p);
    return avg.bound2 - avg.robertson;
  });
  out.schrodinger = root([](double p) {
    const auto avg = averaged_bounds_qubit(p);
    return avg.bound2 - avg.schrodinger;
  });
  return out;
}

MomentTable sphere_moment_check(long dim, long samples, const MonteCarloOptions& opts) {
  if (dim < 2) throw InvalidInput("sphere_moment_check: dim must be >= 2");
  if (samples < 10000) throw InvalidInput("sphere_moment_check: need at least 10000 samples");
  const auto cells = static_cast<std::size_t>(dim * dim);
  const long tasks = task_count(samples);
  std::vector<std::vector<RunningStats>> partial(static_cast<std::size_t>(tasks), std::vector<RunningStats>(cells));
  parallel_for(static_cast<std::size_t>(tasks), opts.workers, [&](std::size_t t) {
    Rng rng = make_rng(opts.seed, kMomentStream ^ static_cast<std::uint64_t>(dim), t);
    auto& acc = partial[t];
    const long n = task_size(samples, static_cast<long>(t));
    for (long i = 0; i < n; ++i) {
      const RealVectord x = random_unit_vector<double>(dim, rng);
      for (long j = 0; j < dim; ++j)
        for (long k = 0; k < dim; ++k) acc[static_cast<std::size_t>(j * dim + k)].add(x(j) * x(k));
    }
  });
  MomentTable out;
  out.dim = dim;
  std::vector<RunningStats> total(cells);
  for (const auto& p : partial)
    for (std::size_t k = 0; k < cells; ++k) total[k].merge(p[k]);
  out.entries.reserve(cells);
  for (const auto& s : total) out.entries.push_back(s.estimate());
  return out;
}

std::vector<AveragedBounds> fig1_table(long points) {
  if (points < 2) throw InvalidInput("fig1_table: need at least 2 points");
  std::vector<AveragedBounds> rows;
  rows.reserve(static_cast<std::size_t>(points));
  for (long i = 0; i < points; ++i) {
    // Endpoints are hit exactly.
    const double p = i == points - 1 ? 1.0 : 0.5 + 0.5 * double(i) / double(points - 1);
    rows.push_back(averaged_bounds_qubit(p));
  }
  return rows;
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  if (res.ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, res.ptr);
}

void write_fig1_csv(std::ostream& out, const std::vector<AveragedBounds>& rows) {
  out << kFig1Header << '\n';
  for (const auto& r : rows) {
    out << format_double(r.purity) << ',' << format_double(r.robertson) << ',' << format_double(r.schrodinger) << ','
        << format_double(r.luo_park) << ',' << format_double(r.bound1) << ',' << format_double(r.bound2) << '\n';
  }
}

}  // namespace cbound
