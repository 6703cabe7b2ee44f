// cbound: command-line front end for the uncertainty-bound library.
//
// Exit codes: 0 ok, 1 hard-inequality violation or non-converged trial,
// 2 usage error, 3 conjectured-inequality violation (compare), 4 I/O error,
// 5 counterexample written (verify-conjecture).

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cbound/bounds.hpp"
#include "cbound/conjecture.hpp"
#include "cbound/errors.hpp"
#include "cbound/mub.hpp"
#include "cbound/parallel.hpp"
#include "cbound/quantum_state.hpp"
#include "cbound/report.hpp"
#include "cbound/sampling.hpp"
#include "cbound/sphere_averaging.hpp"

namespace {

using nlohmann::json;
using namespace cbound;

enum ExitCode : int {
  kOk = 0,
  kViolation = 1,
  kUsage = 2,
  kConjectureViolation = 3,
  kIoError = 4,
  kCounterexample = 5,
};

constexpr std::uint64_t kCompareStream = 0x636d7072;   // "cmpr"
constexpr std::uint64_t kSpectrumStream = 0x73706563;  // "spec"
constexpr std::uint64_t kRestartStream = 0x72737472;   // "rstr"

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// CB_LOG=error|warn|info|debug, default warn. Diagnostics only; data goes to
// the output stream.
enum class LogLevel { error = 0, warn = 1, info = 2, debug = 3 };

LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("CB_LOG");
    const std::string v = env ? env : "";
    if (v == "error") return LogLevel::error;
    if (v == "info") return LogLevel::info;
    if (v == "debug") return LogLevel::debug;
    return LogLevel::warn;
  }();
  return level;
}

void log(LogLevel level, const std::string& msg) {
  static const char* names[] = {"error", "warn", "info", "debug"};
  if (level <= log_level()) std::cerr << "cbound [" << names[static_cast<int>(level)] << "] " << msg << '\n';
}

struct RunConfig {
  std::uint64_t seed = 42;
  unsigned workers = default_workers();
  std::string out;     // empty: stdout
  std::string format;  // empty: command default
};

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty() || cfg.out == "-") {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw IoError("failed writing to stdout");
    return;
  }
  std::ofstream file(cfg.out, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open output file '" + cfg.out + "'");
  file << text;
  file.close();
  if (!file) throw IoError("failed writing output file '" + cfg.out + "'");
}

std::string format_or(const RunConfig& cfg, const char* fallback) {
  const std::string f = cfg.format.empty() ? fallback : cfg.format;
  if (f != "csv" && f != "json") throw InvalidInput("--format must be csv or json");
  return f;
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::error_code ec;
  std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot write counterexample file '" + path.string() + "'");
  file << j.dump(2) << '\n';
  if (!file) throw IoError("failed writing counterexample file '" + path.string() + "'");
}

RealVectord parse_spectrum(const std::vector<double>& values, long dim) {
  if (values.empty()) return RealVectord::Constant(dim, 1.0 / double(dim));
  if (static_cast<long>(values.size()) != dim) {
    throw InvalidInput("--spectrum needs exactly " + std::to_string(dim) + " entries");
  }
  return Eigen::Map<const RealVectord>(values.data(), dim);
}

json spectrum_json(const RealVectord& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

// ---------------------------------------------------------------------------

struct CompareArgs {
  long dim = 2;
  long samples = 1000;
  std::string counterexample_dir = "counterexamples";
};

int cmd_compare(const RunConfig& cfg, const CompareArgs& args) {
  const std::string fmt = format_or(cfg, "json");
  struct Row {
    BoundReport report;
    InequalityFlags flags;
    ComplexMatrixd a, b, rho;
  };
  std::vector<Row> rows(static_cast<std::size_t>(args.samples));
  parallel_for(rows.size(), cfg.workers, [&](std::size_t i) {
    Rng rng = make_rng(cfg.seed, kCompareStream, i);
    const DensityMatrixd rho = sample_density(args.dim, HilbertSchmidt{}, rng);
    const Observabled a(random_hermitian<double>(args.dim, rng));
    const Observabled b(random_hermitian<double>(args.dim, rng));
    Row& row = rows[i];
    row.report = compute_bounds(a, b, rho);
    row.flags = check_inequalities(row.report);
    if (!row.flags.bound2 || !row.flags.hard_ok()) {
      row.a = a.matrix();
      row.b = b.matrix();
      row.rho = rho.matrix();
    }
  });

  std::ostringstream out;
  if (fmt == "csv") {
    out << "index,dim,purity,product,robertson,schrodinger,luo_park,bound1,bound2,hard_ok,conjecture_ok\n";
  }
  long hard = 0;
  long conj = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (fmt == "json") {
      json j = bounds_to_json(r.report, r.flags);
      j["index"] = i;
      out << j.dump() << '\n';
    } else {
      const auto& b = r.report;
      out << i << ',' << b.dim << ',' << format_double(b.purity) << ',' << format_double(b.product) << ','
          << format_double(b.robertson) << ',' << format_double(b.schrodinger) << ',' << format_double(b.luo_park)
          << ',' << format_double(b.bound1) << ',' << format_double(b.bound2) << ',' << (r.flags.hard_ok() ? 1 : 0)
          << ',' << (r.flags.bound2 ? 1 : 0) << '\n';
    }
    if (!r.flags.hard_ok()) {
      ++hard;
      log(LogLevel::error, "hard inequality violated at index " + std::to_string(i));
    }
    if (!r.flags.bound2) {
      ++conj;
      const auto path = std::filesystem::path(args.counterexample_dir) /
                        ("compare-d" + std::to_string(args.dim) + "-seed" + std::to_string(cfg.seed) + "-index" +
                         std::to_string(i) + ".json");
      json j = bounds_to_json(r.report, r.flags);
      j["a"] = matrix_to_json(r.a);
      j["b"] = matrix_to_json(r.b);
      j["rho"] = matrix_to_json(r.rho);
      write_json_file(path, j);
      log(LogLevel::warn, "conjectured inequality violated; wrote " + path.string());
    }
  }
  emit(cfg, out.str());
  log(LogLevel::info, "compare: " + std::to_string(rows.size()) + " triples, " + std::to_string(hard) +
                          " hard violations, " + std::to_string(conj) + " conjecture violations");
  if (hard > 0) return kViolation;
  if (conj > 0) return kConjectureViolation;
  return kOk;
}

int cmd_fig1(const RunConfig& cfg, long points) {
  const auto rows = fig1_table(points);
  std::ostringstream out;
  if (format_or(cfg, "csv") == "csv") {
    write_fig1_csv(out, rows);
  } else {
    for (const auto& r : rows) {
      out << json{{"purity", r.purity},     {"robertson", r.robertson}, {"schrodinger", r.schrodinger},
                  {"luo_park", r.luo_park}, {"bound1", r.bound1},       {"bound2", r.bound2}}
                 .dump()
          << '\n';
    }
  }
  emit(cfg, out.str());
  return kOk;
}

int cmd_fig2(const RunConfig& cfg, long points) {
  const auto rows = fig2_table(points);
  std::ostringstream out;
  if (format_or(cfg, "csv") == "csv") {
    write_fig2_csv(out, rows);
  } else {
    for (const auto& r : rows) {
      out << json{{"purity", r.purity}, {"luo_park_mub_avg", r.luo_park}, {"bound2_mub_avg", r.bound2}}.dump() << '\n';
    }
  }
  emit(cfg, out.str());
  return kOk;
}

struct McArgs {
  std::optional<double> purity;
  bool mub = false;
  long dim = 2;
  std::vector<double> spectrum;
  long samples = 1000000;
};

int cmd_mc_average(const RunConfig& cfg, const McArgs& args) {
  format_or(cfg, "json");
  MonteCarloOptions opts;
  opts.seed = cfg.seed;
  opts.workers = cfg.workers;
  json report;
  double max_abs_z = 0;
  auto add = [&](json& into, const char* name, const MCEstimate& e, double target) {
    into[name] = estimate_to_json(e, target);
    max_abs_z = std::max(max_abs_z, std::abs(z_score(e, target)));
  };
  if (args.mub) {
    if (args.samples < 10000) throw InvalidInput("mc-average --mub needs --samples >= 10000");
    const RealVectord lambda = parse_spectrum(args.spectrum, args.dim);
    const auto avg = mc_mub_average(args.dim, lambda, args.samples, opts);
    report["kind"] = "mub";
    report["dim"] = args.dim;
    report["spectrum"] = spectrum_json(lambda);
    json est;
    add(est, "commutator_norm", avg.commutator_norm, avg.commutator_norm_target);
    add(est, "lp_factor_a", avg.lp_factor_a, avg.lp_factor_a_target);
    add(est, "lp_factor_b", avg.lp_factor_b, avg.lp_factor_b_target);
    add(est, "lp_product", avg.lp_product, avg.lp_product_target);
    report["estimates"] = est;
  } else {
    if (!args.purity) throw InvalidInput("mc-average needs --purity or --mub");
    const auto avg = monte_carlo_qubit_average(*args.purity, args.samples, opts);
    const auto exact = averaged_bounds_qubit(*args.purity);
    report["kind"] = "qubit";
    report["purity"] = *args.purity;
    json est;
    add(est, "robertson", avg.robertson, exact.robertson);
    add(est, "schrodinger", avg.schrodinger, exact.schrodinger);
    add(est, "luo_park", avg.luo_park, exact.luo_park);
    add(est, "bound1", avg.bound1, exact.bound1);
    add(est, "bound2", avg.bound2, exact.bound2);
    report["estimates"] = est;
  }
  report["samples"] = args.samples;
  report["seed"] = cfg.seed;
  report["max_abs_z"] = std::isfinite(max_abs_z) ? json(max_abs_z) : json(nullptr);
  emit(cfg, report.dump() + "\n");
  return kOk;
}

struct MubArgs {
  long dim = 2;
  std::vector<double> spectrum;
  std::optional<double> purity;
};

int cmd_mub_average(const RunConfig& cfg, const MubArgs& args) {
  format_or(cfg, "json");
  RealVectord lambda;
  long dim = args.dim;
  if (args.purity) {
    lambda = qubit_spectrum_from_purity(*args.purity);
    dim = 2;
  } else {
    lambda = parse_spectrum(args.spectrum, dim);
  }
  const auto b2 = mub_b2_average(lambda);
  json report{
      {"dim", dim},
      {"spectrum", spectrum_json(lambda)},
      {"commutator_norm_average", mub_commutator_norm_average(dim)},
      {"luo_park_average", mub_lp_average(lambda)},
      {"bound2_average", b2.value},
      {"degenerate", b2.degenerate},
  };
  emit(cfg, report.dump() + "\n");
  return kOk;
}

struct VerifyArgs {
  long dim = 2;
  long trials = 20;
  int restarts = 8;
  int max_iters = 500;
  double tol = 1e-10;
  std::string mode = "complex";
  std::string counterexample_dir = "counterexamples";
};

int cmd_verify_conjecture(const RunConfig& cfg, const VerifyArgs& args) {
  format_or(cfg, "json");
  const OptimizationMode mode = parse_mode(args.mode);
  struct Trial {
    OptimizationResult result;
    ComplexMatrixd rho;
  };
  std::vector<Trial> trials(static_cast<std::size_t>(args.trials));
  parallel_for(trials.size(), cfg.workers, [&](std::size_t t) {
    Rng rng = make_rng(cfg.seed, kSpectrumStream, t);
    // Flat-simplex spectra have lambda_min > 0 with probability one.
    const DensityMatrixd rho = sample_density(args.dim, FlatSimplex{}, rng);
    OptimizerOptions opts;
    opts.restarts = args.restarts;
    opts.max_iters = args.max_iters;
    opts.tol = args.tol;
    opts.mode = mode;
    opts.seed = derive_seed(cfg.seed, kRestartStream, t);
    trials[t].result = maximize_ratio(rho, opts);
    trials[t].rho = rho.matrix();
  });

  std::ostringstream out;
  double max_dev = 0;
  long counterexamples = 0;
  std::vector<long> non_converged;
  for (std::size_t t = 0; t < trials.size(); ++t) {
    const auto& r = trials[t].result;
    json j = result_to_json(r);
    j["trial"] = t;
    out << j.dump() << '\n';
    max_dev = std::max(max_dev, std::abs(r.relative_deviation()));
    if (!r.converged) non_converged.push_back(static_cast<long>(t));
    for (const auto& d : r.diagnostics) log(LogLevel::warn, "trial " + std::to_string(t) + ": " + d);
    if (r.is_counterexample() || r.exceeds_proven_ceiling()) {
      ++counterexamples;
      j["rho"] = matrix_to_json(trials[t].rho);
      const auto path = std::filesystem::path(args.counterexample_dir) /
                        ("verify-d" + std::to_string(args.dim) + "-" + to_string(mode) + "-seed" +
                         std::to_string(cfg.seed) + "-trial" + std::to_string(t) + ".json");
      write_json_file(path, j);
      log(LogLevel::error, "counterexample candidate written to " + path.string());
    }
  }
  json summary{
      {"dim", args.dim},
      {"mode", to_string(mode)},
      {"trials", args.trials},
      {"max_relative_deviation", max_dev},
      {"non_converged", non_converged},
      {"counterexamples", counterexamples},
  };
  out << json{{"summary", summary}}.dump() << '\n';
  emit(cfg, out.str());
  if (counterexamples > 0) return kCounterexample;
  if (!non_converged.empty()) return kViolation;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variance-product uncertainty bounds and the weighted commutator inequality"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  app.add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
  app.add_option("--workers", cfg.workers, "worker threads (default: available parallelism)")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", cfg.out, "output path (default stdout)");
  app.add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  CompareArgs compare;
  auto* c = app.add_subcommand("compare", "bounds and variance product for random (A, B, rho) triples");
  c->add_option("--dim", compare.dim)->required()->check(CLI::Range(2L, 64L));
  c->add_option("--samples", compare.samples)->check(CLI::Range(1L, 100000000L))->capture_default_str();
  c->add_option("--counterexample-dir", compare.counterexample_dir)->capture_default_str();

  long fig1_points = 101;
  auto* f1 = app.add_subcommand("fig1", "purity-averaged qubit bounds on a grid");
  f1->add_option("--points", fig1_points)->check(CLI::Range(2L, 10000000L))->capture_default_str();

  long fig2_points = 101;
  auto* f2 = app.add_subcommand("fig2", "qubit mutually-unbiased averages on a purity grid");
  f2->add_option("--points", fig2_points)->check(CLI::Range(2L, 10000000L))->capture_default_str();

  McArgs mc;
  auto* m = app.add_subcommand("mc-average", "Monte-Carlo averages against closed forms");
  auto* purity_opt = m->add_option("--purity", mc.purity)->check(CLI::Range(0.5, 1.0));
  auto* mub_flag = m->add_flag("--mub", mc.mub, "mutually unbiased pair in dimension --dim");
  purity_opt->excludes(mub_flag);
  m->add_option("--dim", mc.dim)->check(CLI::Range(2L, 64L))->capture_default_str();
  m->add_option("--spectrum", mc.spectrum, "state eigenvalues (default maximally mixed)")->delimiter(',');
  m->add_option("--samples", mc.samples)->check(CLI::Range(1000L, 1000000000L))->capture_default_str();

  MubArgs mub;
  auto* u = app.add_subcommand("mub-average", "closed-form averages over mutually unbiased spectra");
  u->add_option("--dim", mub.dim)->check(CLI::Range(2L, 64L))->capture_default_str();
  auto* spec_opt = u->add_option("--spectrum", mub.spectrum, "state eigenvalues (default maximally mixed)")
                       ->delimiter(',');
  u->add_option("--purity", mub.purity, "qubit state of this purity")->check(CLI::Range(0.5, 1.0))->excludes(spec_opt);

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify-conjecture", "maximize the commutator ratio for random spectra");
  v->add_option("--dim", verify.dim)->required()->check(CLI::Range(2L, 15L));
  v->add_option("--trials", verify.trials)->check(CLI::Range(1L, 1000000L))->capture_default_str();
  v->add_option("--restarts", verify.restarts)->check(CLI::Range(0, 10000))->capture_default_str();
  v->add_option("--max-iters", verify.max_iters)->check(CLI::Range(1, 1000000))->capture_default_str();
  v->add_option("--tol", verify.tol)->check(CLI::PositiveNumber)->capture_default_str();
  v->add_option("--mode", verify.mode)->check(CLI::IsMember({"complex", "hermitian"}))->capture_default_str();
  v->add_option("--counterexample-dir", verify.counterexample_dir)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (c->parsed()) return cmd_compare(cfg, compare);
    if (f1->parsed()) return cmd_fig1(cfg, fig1_points);
    if (f2->parsed()) return cmd_fig2(cfg, fig2_points);
    if (m->parsed()) return cmd_mc_average(cfg, mc);
    if (u->parsed()) return cmd_mub_average(cfg, mub);
    if (v->parsed()) return cmd_verify_conjecture(cfg, verify);
  } catch (const IoError& e) {
    log(LogLevel::error, e.what());
    return kIoError;
  } catch (const InvalidInput& e) {
    log(LogLevel::error, e.what());
    return kUsage;
  } catch (const std::exception& e) {
    log(LogLevel::error, e.what());
    return kViolation;
  }
  return kUsage;
}
