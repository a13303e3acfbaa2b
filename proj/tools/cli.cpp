#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "disclab/bounds.hpp"
#include "disclab/core.hpp"
#include "disclab/density.hpp"
#include "disclab/discrepancy.hpp"
#include "disclab/error.hpp"
#include "disclab/experiments.hpp"
#include "disclab/format.hpp"
#include "disclab/verify.hpp"

namespace disclab::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kUsage = 2;

std::uint64_t fresh_seed() {
  std::random_device rd;
  const auto now = static_cast<std::uint64_t>(
      std::chrono::steady_clock::now().time_since_epoch().count());
  return (static_cast<std::uint64_t>(rd()) << 32 ^ rd()) ^ now;
}

// Writes to --out when given, else to `out`.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw Error(ErrorKind::io_error, "cannot write '" + path + "'");
    }
  }
  std::ostream& stream(std::ostream& fallback) { return file_.is_open() ? file_ : fallback; }
  bool to_file() const { return file_.is_open(); }

 private:
  std::ofstream file_;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io_error, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct DensityArgs {
  double p = 2.0;
  std::size_t grid = 101;
  std::string out;
  std::string format = "csv";
};

int cmd_density(const DensityArgs& a, std::ostream& out) {
  const Density1D rho = optimal_density(a.p);
  Sink sink(a.out);
  auto& os = sink.stream(out);
  if (a.format == "csv") {
    write_density_csv(os, rho, a.grid);
  } else {
    Json rows = Json::array();
    for (double t : linear_grid(0.0, 1.0, a.grid)) {
      rows.push_back({{"t", t}, {"rho", rho.value(t)}, {"cdf", rho.cdf(t)}});
    }
    os << Json{{"p", a.p}, {"rows", rows}}.dump(2) << '\n';
  }
  return kOk;
}

struct DiscrepancyArgs {
  std::string file;
  double p = 2.0;
  std::string method = "auto";
  int order = kDefaultCellOrder;
  std::uint64_t samples = 100000;
  std::optional<std::uint64_t> seed;
};

int cmd_discrepancy(DiscrepancyArgs a, std::ostream& out, std::ostream& err) {
  std::ifstream in(a.file);
  if (!in) throw Error(ErrorKind::io_error, "cannot open '" + a.file + "'");
  const WeightedPointSet ps = read_point_set(in);

  Method method;
  if (a.method == "auto") {
    method = a.p == 2.0 ? Method::kernel_p2
                        : (ps.dim() <= 4 ? Method::cell_quadrature : Method::monte_carlo);
  } else {
    method = parse_method(a.method);
  }
  DiscrepancyResult r;
  switch (method) {
    case Method::kernel_p2:
      if (a.p != 2.0) throw Error(ErrorKind::invalid_argument, "kernel_p2 needs --p 2");
      r = l2_discrepancy_kernel(ps);
      break;
    case Method::even_p_exact:
      if (a.p != 2.0 && a.p != 4.0) throw Error(ErrorKind::invalid_argument, "even_p_exact needs --p 2 or 4");
      r = lp_discrepancy_even(ps, static_cast<int>(a.p));
      break;
    case Method::cell_quadrature:
      r = lp_discrepancy_cells(ps, a.p, a.order);
      break;
    case Method::monte_carlo:
      if (!a.seed) {
        a.seed = fresh_seed();
        err << "seed: " << *a.seed << '\n';
      }
      r = lp_discrepancy_mc(ps, a.p, a.samples, *a.seed);
      break;
  }
  Json j{{"p", r.p},
         {"d", ps.dim()},
         {"N", ps.size()},
         {"method", method_name(r.method)},
         {"value", r.value},
         {"abs_error_estimate", r.abs_error_estimate}};
  if (a.seed && method == Method::monte_carlo) j["seed"] = *a.seed;
  out << j.dump() << '\n';
  return kOk;
}

struct ExperimentArgs {
  std::string config;
  std::string out;
  std::string format = "json";
  std::optional<std::uint64_t> seed;
};

int cmd_experiment(const ExperimentArgs& a, std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg = parse_config_json(read_file(a.config));
  if (a.seed) cfg.seed = a.seed;
  if (!cfg.seed) cfg.seed = fresh_seed();
  const ExperimentReport rep = run_average_discrepancy(cfg);
  if (rep.resamples > 0) {
    err << "warning: " << rep.resamples
        << " draws landed where the density vanishes and were repeated\n";
  }
  Sink sink(a.out);
  sink.stream(out) << (a.format == "csv" ? report_to_csv(cfg, rep) : report_to_json(cfg, rep));
  std::ostream& summary = sink.to_file() ? out : err;
  summary << "seed: " << rep.seed << '\n'
          << "scaled: " << format_real(rep.scaled) << " +- " << format_real(rep.scaled_std_error)
          << '\n';
  return kOk;
}

struct SampleArgs {
  std::size_t N = 16;
  std::size_t d = 1;
  std::string density = "uniform";
  double p = 2.0;
  std::string out;
  std::optional<std::uint64_t> seed;
};

int cmd_sample(SampleArgs a, std::ostream& out, std::ostream& err) {
  if (!a.seed) {
    a.seed = fresh_seed();
    err << "seed: " << *a.seed << '\n';
  }
  const ProductDensity rho =
      a.density == "uniform" ? ProductDensity::uniform(a.d) : ProductDensity::optimal(a.d, a.p);
  const WeightedPointSet ps = sample_point_set(rho, a.N, *a.seed, 0);
  Sink sink(a.out);
  write_point_set(sink.stream(out), ps);
  return kOk;
}

struct BoundsArgs {
  double pmin = 1.0;
  double pmax = 10.0;
  std::size_t steps = 10;
  bool figure = false;
  std::string out;
};

int cmd_bounds(const BoundsArgs& a, std::ostream& out) {
  const auto grid = linear_grid(a.pmin, a.pmax, a.steps);
  Sink sink(a.out);
  if (a.figure) {
    write_alpha_csv(sink.stream(out), figure_alpha_data(grid));
  } else {
    std::vector<BoundsRow> rows;
    for (double p : grid) rows.push_back(bounds_row(p));
    write_bounds_csv(sink.stream(out), rows);
  }
  return kOk;
}

int cmd_verify(const std::string& only, std::ostream& out) {
  std::optional<std::string_view> group;
  if (!only.empty()) group = only;
  const auto results = run_checks(group);
  std::size_t failed = 0;
  for (const auto& r : results) {
    out << (r.passed ? "PASS " : "FAIL ") << r.group << ": " << r.name
        << "  actual=" << format_real(r.actual) << " expected=" << format_real(r.expected)
        << " tol=" << r.tolerance << '\n';
    if (!r.passed) ++failed;
  }
  out << results.size() - failed << '/' << results.size() << " checks passed\n";
  return failed == 0 ? kOk : kVerifyFailed;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Generalized L_p discrepancy laboratory", "disclab"};
  app.require_subcommand(1, 1);
  std::optional<std::uint64_t> seed;

  DensityArgs density_args;
  auto* density = app.add_subcommand("density", "Tabulate the optimal density for exponent p");
  density->add_option("--p", density_args.p, "Exponent p >= 1")->required();
  density->add_option("--grid", density_args.grid, "Number of equispaced nodes")
      ->check(CLI::Range(std::size_t{2}, std::size_t{10000000}));
  density->add_option("--out", density_args.out, "Output file (default stdout)");
  density->add_option("--format", density_args.format)->check(CLI::IsMember({"csv", "json"}));

  DiscrepancyArgs disc_args;
  auto* disc = app.add_subcommand("discrepancy", "Evaluate the L_p discrepancy of a point-set file");
  disc->add_option("file", disc_args.file, "Point-set file")->required();
  disc->add_option("--p", disc_args.p, "Exponent p >= 1");
  disc->add_option("--method", disc_args.method)
      ->check(CLI::IsMember({"auto", "kernel_p2", "even_p_exact", "cell_quadrature", "monte_carlo"}));
  disc->add_option("--order", disc_args.order, "Gauss nodes per piece for cell quadrature");
  disc->add_option("--samples", disc_args.samples, "Monte Carlo samples");

  ExperimentArgs exp_args;
  auto* exp = app.add_subcommand("experiment", "Run a seeded average-discrepancy experiment");
  exp->add_option("--config", exp_args.config, "JSON configuration")->required();
  exp->add_option("--out", exp_args.out, "Report file (default stdout)");
  exp->add_option("--format", exp_args.format)->check(CLI::IsMember({"json", "csv"}));

  SampleArgs sample_args;
  auto* sample = app.add_subcommand("sample", "Write an importance-sampled point set");
  sample->add_option("--N", sample_args.N)->check(CLI::PositiveNumber);
  sample->add_option("--d", sample_args.d)->check(CLI::PositiveNumber);
  sample->add_option("--density", sample_args.density)->check(CLI::IsMember({"uniform", "optimal"}));
  sample->add_option("--p", sample_args.p, "Exponent for the optimal density");
  sample->add_option("--out", sample_args.out, "Output file (default stdout)");

  BoundsArgs bounds_args;
  auto* bounds = app.add_subcommand("bounds", "Tabulate alpha constants and prefactors");
  bounds->add_option("--pmin", bounds_args.pmin);
  bounds->add_option("--pmax", bounds_args.pmax);
  bounds->add_option("--steps", bounds_args.steps)->check(CLI::PositiveNumber);
  bounds->add_flag("--figure", bounds_args.figure, "Only p, alpha_old^2, alpha_new^2");
  bounds->add_option("--out", bounds_args.out, "Output file (default stdout)");

  std::string only;
  auto* verify = app.add_subcommand("verify", "Run the golden-value checks");
  const auto groups = check_groups();
  verify->add_option("--only", only, "Restrict to one group")
      ->check(CLI::IsMember(std::vector<std::string>(groups.begin(), groups.end())));

  for (auto* sub : {density, disc, exp, sample, bounds, verify}) {
    sub->add_option("--seed", seed, "RNG seed (generated and printed when absent)");
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*density) return cmd_density(density_args, out);
    if (*disc) {
      disc_args.seed = seed;
      return cmd_discrepancy(disc_args, out, err);
    }
    if (*exp) {
      exp_args.seed = seed;
      return cmd_experiment(exp_args, out, err);
    }
    if (*sample) {
      sample_args.seed = seed;
      return cmd_sample(sample_args, out, err);
    }
    if (*bounds) return cmd_bounds(bounds_args, out);
    if (*verify) return cmd_verify(only, out);
  } catch (const SolverFailure& e) {
    err << "error (solver_failure at t=" << format_real(e.t()) << "): " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace disclab::cli
