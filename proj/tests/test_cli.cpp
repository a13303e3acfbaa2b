#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "disclab/core.hpp"
#include "disclab/verify.hpp"

using disclab::cli::run_cli;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("disclab_cli_" + std::to_string(::getpid()));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

std::vector<std::vector<double>> csv_rows(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);  // header
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
    rows.push_back(row);
  }
  return rows;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string seed_line(const std::string& err) {
  const auto pos = err.find("seed: ");
  REQUIRE(pos != std::string::npos);
  return err.substr(pos + 6, err.find('\n', pos) - pos - 6);
}

}  // namespace

TEST_CASE("density tables") {
  auto r = run({"density", "--p", "2", "--grid", "5"});
  REQUIRE(r.code == 0);
  auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 5);
  CHECK(rows.front()[1] == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(rows.back()[1] == 0.0);
  CHECK(rows.back()[2] == 1.0);

  r = run({"density", "--p", "1", "--grid", "3"});
  rows = csv_rows(r.out);
  CHECK(rows[0][1] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(rows[1][1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(rows[2][1] == 0.0);

  r = run({"density", "--p", "10"});
  rows = csv_rows(r.out);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i][1] <= rows[i - 1][1]);

  r = run({"density", "--p", "3", "--grid", "4", "--format", "json"});
  CHECK(r.code == 0);
  CHECK(r.out.find("\"rows\"") != std::string::npos);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run({"density", "--p", "0.5"}).code == 2);
  CHECK(run({"density", "--p", "2", "--bogus"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"discrepancy", "/nonexistent/file"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("verify passes and can be filtered") {
  auto r = run({"verify"});
  CHECK(r.code == 0);
  CHECK(r.out.find("FAIL") == std::string::npos);
  const auto all = std::count(r.out.begin(), r.out.end(), '\n');

  r = run({"verify", "--only", "p2"});
  CHECK(r.code == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') < all);
  CHECK(r.out.find("bounds:") == std::string::npos);
  CHECK(run({"verify", "--only", "nonsense"}).code == 2);
}

namespace {
double skewed_log_gamma(double x) { return std::lgamma(x) + 1e-6; }
}  // namespace

TEST_CASE("a faulty Gamma implementation fails the prefactor checks") {
  disclab::VerifyOptions opts;
  opts.log_gamma = skewed_log_gamma;
  const auto results = disclab::run_checks("bounds", opts);
  int failed = 0;
  for (const auto& r : results) {
    if (!r.passed) {
      CHECK(r.name.find("gamma prefactor") != std::string::npos);
      ++failed;
    }
  }
  CHECK(failed > 0);
}

TEST_CASE("sampled point sets round trip through files") {
  TempDir dir;
  const auto path = dir.file("points.txt");
  auto r = run({"sample", "--N", "9", "--d", "2", "--density", "optimal", "--p", "2", "--seed", "4",
                "--out", path});
  REQUIRE(r.code == 0);

  const auto first = run({"discrepancy", path, "--p", "1.5"});
  REQUIRE(first.code == 0);

  // Re-read, re-write, and evaluate again: everything identical.
  std::ifstream in(path);
  const auto ps = disclab::read_point_set(in);
  const auto copy = dir.file("copy.txt");
  {
    std::ofstream out(copy);
    disclab::write_point_set(out, ps);
  }
  CHECK(slurp(copy) == slurp(path));
  CHECK(run({"discrepancy", copy, "--p", "1.5"}).out == first.out);

  const auto kernel = run({"discrepancy", path});
  const auto cells = run({"discrepancy", path, "--method", "cell_quadrature", "--p", "2"});
  CHECK(kernel.out.find("kernel_p2") != std::string::npos);
  CHECK(cells.out.find("cell_quadrature") != std::string::npos);
  CHECK(run({"discrepancy", path, "--method", "kernel_p2", "--p", "3"}).code == 2);
}

TEST_CASE("absent seeds are generated, printed and reproducible") {
  TempDir dir;
  const auto path = dir.file("points.txt");
  REQUIRE(run({"sample", "--N", "5", "--seed", "1", "--out", path}).code == 0);

  const auto r = run({"discrepancy", path, "--method", "monte_carlo", "--p", "1", "--samples", "2000"});
  REQUIRE(r.code == 0);
  const auto seed = seed_line(r.err);
  const auto again = run({"discrepancy", path, "--method", "monte_carlo", "--p", "1", "--samples",
                          "2000", "--seed", seed});
  CHECK(again.out == r.out);

  const auto s1 = run({"sample", "--N", "4"});
  const auto s2 = run({"sample", "--N", "4", "--seed", seed_line(s1.err)});
  CHECK(s1.out == s2.out);
}

TEST_CASE("experiments from config files") {
  TempDir dir;
  const auto cfg = dir.file("cfg.json");
  {
    std::ofstream out(cfg);
    out << R"({"p": 2, "d": 1, "N": 3, "density_kind": "optimal", "replications": 2})";
  }
  const auto report = dir.file("report.json");
  auto r = run({"experiment", "--config", cfg, "--out", report});
  REQUIRE(r.code == 0);
  const auto seed = seed_line(r.out);
  CHECK(r.out.find("scaled: ") != std::string::npos);
  const std::string first = slurp(report);
  CHECK(first.find("\"std_error\"") != std::string::npos);

  r = run({"experiment", "--config", cfg, "--out", report, "--seed", seed});
  CHECK(slurp(report) == first);

  r = run({"experiment", "--config", cfg, "--seed", "5", "--format", "csv"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("p,d,N,", 0) == 0);

  {
    std::ofstream out(cfg);
    out << R"({"p": 2, "replications": 1})";
  }
  CHECK(run({"experiment", "--config", cfg}).code == 2);
}

TEST_CASE("bounds tables") {
  auto r = run({"bounds", "--pmin", "1", "--pmax", "3", "--steps", "3"});
  REQUIRE(r.code == 0);
  auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[1][0] == 2.0);
  CHECK(rows[1][3] == doctest::Approx(1.5).epsilon(1e-15));

  r = run({"bounds", "--pmin", "1", "--pmax", "2", "--steps", "2", "--figure"});
  CHECK(r.out.rfind("p,alpha_old_sq,alpha_new_sq\n", 0) == 0);
}
