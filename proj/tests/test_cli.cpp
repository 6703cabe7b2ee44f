#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cbound/report.hpp"
#include "oracle.hpp"

using namespace cbound;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
};

// Runs the CLI with stderr discarded, capturing stdout.
Run cli(const std::string& args) {
  const std::string cmd = std::string(CBOUND_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("cbound_cli_test_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("matrix JSON round trip") {
  std::mt19937_64 g(1);
  const ComplexMatrixd m = oracle::gaussian(3, 3, g);
  const json j = matrix_to_json(m);
  CHECK(j.size() == 3);
  CHECK(j[1][2][0].get<double>() == m(1, 2).real());
  CHECK(j[1][2][1].get<double>() == m(1, 2).imag());
  CHECK(matrix_from_json(json::parse(j.dump())) == m);
  CHECK_THROWS(matrix_from_json(json::parse("[[[1,0],[2,0]],[[1,0]]]")));
}

TEST_CASE("estimate JSON reports a null z-score for an exact mismatch") {
  CHECK(estimate_to_json({0.5, 0.0, 10}, 0.0)["z"].is_null());
  CHECK(estimate_to_json({0.5, 0.25, 10}, 0.0)["z"].get<double>() == 2.0);
}

TEST_CASE("compare emits one report per triple") {
  const auto r = cli("--seed 7 compare --dim 2 --samples 1000");
  CHECK(r.code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 1000);
  for (std::size_t i = 0; i < ls.size(); ++i) {
    const json j = json::parse(ls[i]);
    CHECK(j["index"].get<std::size_t>() == i);
    CHECK(j["dim"] == 2);
    CHECK(j["pass"]["robertson"] == true);
    CHECK(j["pass"]["bound1"] == true);
    CHECK(j["pass"]["bound2"] == true);
    CHECK(j["product"].get<double>() >= j["luo_park"].get<double>() * (1 - 1e-10));
  }
}

TEST_CASE("compare is byte-reproducible and independent of workers") {
  const auto a = cli("--seed 3 --workers 1 compare --dim 4 --samples 300");
  const auto b = cli("--seed 3 --workers 1 compare --dim 4 --samples 300");
  const auto c = cli("--seed 3 --workers 3 compare --dim 4 --samples 300");
  const auto d = cli("--seed 4 --workers 1 compare --dim 4 --samples 300");
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);
  CHECK(a.out != d.out);
  const auto csv = cli("--seed 3 --format csv compare --dim 4 --samples 5");
  CHECK(lines(csv.out).size() == 6);
  CHECK(csv.out.rfind("index,dim,purity,product,", 0) == 0);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(cli("compare --dim 0").code == 2);
  CHECK(cli("compare").code == 2);
  CHECK(cli("--format xml fig1").code == 2);
  CHECK(cli("frobnicate").code == 2);
  CHECK(cli("").code == 2);
  CHECK(cli("verify-conjecture --dim 16").code == 2);
  CHECK(cli("verify-conjecture --dim 3 --mode real").code == 2);
  CHECK(cli("mc-average --purity 0.7 --samples 999").code == 2);
  CHECK(cli("mc-average --purity 1.2").code == 2);
  CHECK(cli("mc-average --samples 1000").code == 2);
  CHECK(cli("mc-average --mub --dim 3 --spectrum 0.5,0.5").code == 2);
  CHECK(cli("mub-average --dim 2 --spectrum 0.7,0.7").code == 2);
  CHECK(cli("--workers 0 fig1").code == 2);
  CHECK(cli("--help").code == 0);
}

TEST_CASE("fig1 writes the closed-form table") {
  const fs::path out = scratch("fig1.csv");
  CHECK(cli("--out " + out.string() + " fig1 --points 3").code == 0);
  const auto ls = lines(slurp(out));
  REQUIRE(ls.size() == 4);
  CHECK(ls[0] == "purity,robertson,schrodinger,luo_park,bound1,bound2");
  CHECK(ls[1] == "0.5,0,0.3333333333333333,1,0.6666666666666666,0.6666666666666666");
  CHECK(ls[2].rfind("0.75,", 0) == 0);
  CHECK(ls[3] == "1,0.2222222222222222,0.4444444444444444,0.2222222222222222,0,0");

  const auto json_rows = lines(cli("--format json fig1 --points 2").out);
  REQUIRE(json_rows.size() == 2);
  CHECK(json::parse(json_rows[0])["luo_park"] == 1.0);
}

TEST_CASE("unwritable output path exits with 4") {
  CHECK(cli("--out /nonexistent-dir/fig1.csv fig1").code == 4);
  CHECK(cli("--out /nonexistent-dir/fig2.csv fig2").code == 4);
}

TEST_CASE("fig2 endpoints") {
  const auto ls = lines(cli("fig2 --points 3").out);
  REQUIRE(ls.size() == 4);
  CHECK(ls[0] == "purity,luo_park_mub_avg,bound2_mub_avg");
  const auto first = ls[1];
  CHECK(first.rfind("0.5,", 0) == 0);
  const double lp = std::stod(first.substr(4, first.find(',', 4) - 4));
  const double b2 = std::stod(first.substr(first.rfind(',') + 1));
  CHECK(lp == doctest::Approx(1.0 / 16).epsilon(1e-14));
  CHECK(b2 == doctest::Approx(1.0 / 16).epsilon(1e-14));
  CHECK(ls[3] == "1,0,0");
}

TEST_CASE("mc-average reports z-scores against closed forms") {
  const auto r = cli("mc-average --purity 0.5 --samples 1000000");
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  for (const char* k : {"robertson", "schrodinger", "luo_park", "bound1", "bound2"}) {
    const auto& e = j["estimates"][k];
    CHECK(e["samples"] == 1000000);
    CHECK(std::abs(e["z"].get<double>()) < 4);
  }
  CHECK(j["estimates"]["luo_park"]["target"].get<double>() == doctest::Approx(1.0).epsilon(1e-15));

  const json m = json::parse(cli("mc-average --mub --dim 3 --samples 20000").out);
  CHECK(m["estimates"]["commutator_norm"]["target"].get<double>() == doctest::Approx(4.0 / 27).epsilon(1e-15));
  CHECK(m["kind"] == "mub");
  CHECK(m["spectrum"].size() == 3);

  const json s = json::parse(cli("mc-average --mub --dim 2 --spectrum 0.25,0.75 --samples 20000").out);
  CHECK(s["estimates"]["lp_factor_a"]["target"].get<double>() == doctest::Approx(3.0 / 16).epsilon(1e-15));
}

TEST_CASE("mub-average closed forms") {
  const json j = json::parse(cli("mub-average --dim 3").out);
  CHECK(j["commutator_norm_average"].get<double>() == doctest::Approx(4.0 / 27).epsilon(1e-15));
  CHECK(j["bound2_average"].get<double>() == doctest::Approx(2.0 / 81).epsilon(1e-14));
  const json q = json::parse(cli("mub-average --purity 0.75").out);
  CHECK(q["dim"] == 2);
  CHECK(q["bound2_average"].get<double>() == doctest::Approx(0.25 / 8).epsilon(1e-14));
  CHECK(q["degenerate"] == false);
}

TEST_CASE("verify-conjecture for qubits") {
  const fs::path dir = scratch("cex");
  const auto r = cli("verify-conjecture --dim 2 --trials 50 --counterexample-dir " + dir.string());
  CHECK(r.code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 51);
  const json summary = json::parse(ls.back())["summary"];
  CHECK(summary["trials"] == 50);
  CHECK(summary["max_relative_deviation"].get<double>() < 1e-6);
  CHECK(summary["counterexamples"] == 0);
  CHECK(summary["non_converged"].empty());
  const json first = json::parse(ls[0]);
  CHECK(first["trial"] == 0);
  CHECK(first["witness_a"].size() == 2);
  CHECK_FALSE(fs::exists(dir));
}

TEST_CASE("verify-conjecture in dimension 6") {
  const auto r = cli("verify-conjecture --dim 6 --trials 20 --mode hermitian");
  CHECK(r.code == 0);
  const json summary = json::parse(lines(r.out).back())["summary"];
  CHECK(summary["mode"] == "hermitian");
  CHECK(summary["max_relative_deviation"].get<double>() < 1e-5);
}

TEST_CASE("verify-conjecture output is reproducible") {
  const auto a = cli("--seed 9 verify-conjecture --dim 3 --trials 4");
  const auto b = cli("--seed 9 --workers 2 verify-conjecture --dim 3 --trials 4");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
}
