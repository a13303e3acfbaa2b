// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails. Each criterion also has a wall-clock budget.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "disclab/bounds.hpp"
#include "disclab/core.hpp"
#include "disclab/density.hpp"
#include "disclab/discrepancy.hpp"
#include "disclab/experiments.hpp"
#include "disclab/quadrature.hpp"
#include "disclab/rng.hpp"

using namespace disclab;

namespace {

// Collects individual checks for one criterion and remembers the first few
// failures for the report line.
class Ledger {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (!ok) {
      ++failures_;
      if (notes_.size() < 4) notes_.push_back(what);
    }
  }
  void near(double actual, double expected, double tol, const std::string& what) {
    std::ostringstream os;
    os.precision(17);
    os << what << ": got " << actual << ", want " << expected << " +- " << tol;
    expect(std::abs(actual - expected) <= tol, os.str());
  }
  void note(const std::string& s) { info_.push_back(s); }

  bool ok() const { return failures_ == 0; }
  std::size_t checks() const { return checks_; }
  std::size_t failures() const { return failures_; }
  const std::vector<std::string>& notes() const { return notes_; }
  const std::vector<std::string>& info() const { return info_; }

 private:
  std::size_t checks_ = 0;
  std::size_t failures_ = 0;
  std::vector<std::string> notes_;
  std::vector<std::string> info_;
};

struct Criterion {
  int id;
  std::string title;
  double budget_seconds;
  std::function<void(Ledger&)> body;
};

std::string fmt(double v, int precision = 6) {
  std::ostringstream os;
  os.precision(precision);
  os << v;
  return os.str();
}

const double kDensityGrid[] = {1.0, 1.5, 2.0, 3.0, 10.0, 100.0};

void golden_constants(Ledger& L) {
  L.near(c_kernel(ProductDensity::optimal(1, 2.0)).C_K, 4.0 / 9.0, 1e-12, "C(K_1, rho*)");
  for (double p : {1.0, 2.0, 3.0, 10.0}) {
    L.near(variational_solution(p).S1, (p + 2.0) / (p + 1.0), 1e-12, "S1 p=" + fmt(p));
  }
  L.near(variational_solution(2.0).Jmin, 4.0 / 9.0, 1e-12, "J_min(2)");
  const double third[] = {1.0 / 3.0};
  const double half[] = {0.5};
  L.near(l2_discrepancy_kernel(WeightedPointSet(1, third, {2.0 / 3.0})).value, 1.0 / std::sqrt(27.0),
         1e-12, "one-point rule t=1/3");
  L.near(l2_discrepancy_kernel(WeightedPointSet(1, half, {1.0})).value, 1.0 / std::sqrt(12.0), 1e-12,
         "one-point rule t=1/2");
  L.near(std::pow(alpha_old(2.0), 2), 1.5, 1e-12, "alpha_old^2(2)");
  L.near(std::pow(alpha_old(10.0), 2), 1.13, 0.005, "alpha_old^2(10)");
  L.near(std::pow(alpha_old(100.0), 2), 1.014, 0.002, "alpha_old^2(100)");
  L.near(alpha_new(1.0), std::sqrt(1.5), 1e-12, "alpha_new(1)");
}

void density_correctness(Ledger& L) {
  for (double p : kDensityGrid) {
    const Density1D rho = optimal_density(p);
    double worst_complement = 0.0;
    double worst_rho_form = 0.0;
    for (int i = 0; i <= 1000; ++i) {
      const double t = i / 1000.0;
      worst_complement = std::max(worst_complement,
                                  std::abs(residual_eq_rho_complement(p, t, rho.complement(t))));
      worst_rho_form = std::max(worst_rho_form, std::abs(residual_eq_rho(p, t, rho.value(t))));
    }
    // The relation is checked in the variable the solver works in; the
    // residual recomputed from a rounded rho is reported alongside.
    L.expect(worst_complement <= 1e-9, "residual p=" + fmt(p) + " is " + fmt(worst_complement));
    L.note("p=" + fmt(p) + ": max residual " + fmt(worst_complement, 3) + " (from rounded rho: " +
           fmt(worst_rho_form, 3) + ")");

    auto f = [&](double t) { return rho.value(t); };
    const double mass = quad::integrate_unit(f, 0.0, 1.0, {1e-13, 0.0, 4000}).value;
    L.near(mass, 1.0, 1e-9, "mass p=" + fmt(p));
  }
  for (double p : {1.0, 2.0}) {
    const Density1D closed = optimal_density(p);
    const Density1D grid = tabulated_optimal_density(p);
    double worst = 0.0;
    for (int i = 0; i <= 1000; ++i) {
      const double t = i / 1000.0;
      worst = std::max(worst, std::abs(closed.value(t) - grid.value(t)));
    }
    L.expect(worst <= 1e-8, "closed form vs grid p=" + fmt(p) + " differs by " + fmt(worst));
  }
}

void functional_optimality(Ledger& L) {
  for (double p : kDensityGrid) {
    const double jmin = std::pow((p + 2.0) / (p + 1.0), p / 2.0) / (p + 1.0);
    const double j_opt = J_functional(optimal_density(p), p);
    L.near(j_opt, jmin, 1e-7, "J(rho*) p=" + fmt(p));
    const double j_uni = J_functional(Density1D::uniform(), p);
    L.expect(j_uni > j_opt, "J(uniform) > J(rho*) p=" + fmt(p));
  }
}

WeightedPointSet random_set(std::size_t d, std::size_t n, std::uint64_t seed) {
  CounterRng rng(seed, 77);
  std::vector<double> coords(d * n);
  std::vector<double> weights(n);
  for (double& x : coords) x = rng.uniform();
  for (double& a : weights) a = 2.0 * rng.uniform() / static_cast<double>(n);
  return WeightedPointSet(d, coords, std::move(weights));
}

void evaluator_cross_validation(Ledger& L) {
  double worst_even = 0.0;
  double worst_cells = 0.0;
  double worst_z = 0.0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const std::size_t d = 1 + s % 3;
    const std::size_t n = 1 + (s * 13) % 32;
    const auto ps = random_set(d, n, 1000 + s);
    const double kernel = l2_discrepancy_kernel(ps).value;
    const double even = lp_discrepancy_even(ps, 2).value;
    const double cells = lp_discrepancy_cells(ps, 2.0).value;
    worst_even = std::max(worst_even, std::abs(kernel - even));
    worst_cells = std::max(worst_cells, std::abs(kernel - cells));
    L.expect(std::abs(kernel - even) <= 1e-12, "kernel vs expansion, set " + std::to_string(s));
    L.expect(std::abs(kernel - cells) <= 1e-8, "kernel vs cells, set " + std::to_string(s));
    for (double p : {1.0, 1.5, 3.0}) {
      const auto mc = lp_discrepancy_mc(ps, p, 20000, 5000 + s);
      const double ref = lp_discrepancy_cells(ps, p).value;
      const double z = std::abs(mc.value - ref) / mc.abs_error_estimate;
      worst_z = std::max(worst_z, z);
      L.expect(z <= 4.0, "MC vs cells p=" + fmt(p) + ", set " + std::to_string(s) + ": " + fmt(z) + " SE");
    }
  }
  L.note("max |kernel-expansion| " + fmt(worst_even, 3) + ", max |kernel-cells| " +
         fmt(worst_cells, 3) + ", max MC deviation " + fmt(worst_z, 3) + " SE");
}

void expectation_identities(Ledger& L) {
  const std::pair<std::size_t, std::size_t> cases[] = {{4, 1}, {16, 2}, {16, 3}};
  std::vector<double> ratios;
  for (const auto& [N, d] : cases) {
    double nav[2];
    double se[2];
    for (int k = 0; k < 2; ++k) {
      ExperimentConfig cfg;
      cfg.p = 2.0;
      cfg.N = N;
      cfg.d = d;
      cfg.density_kind = k == 0 ? DensityKind::uniform : DensityKind::optimal;
      cfg.replications = 10000;
      cfg.seed = 31337 + 10 * N + d;
      const auto rep = run_average_discrepancy(cfg);
      const double exact = exact_nav2(N, d, k == 0 ? SamplingDensity::uniform : SamplingDensity::optimal);
      nav[k] = rep.n_av_p;
      se[k] = rep.n_av_std_error;
      L.expect(std::abs(rep.n_av_p - exact) <= 3.0 * rep.n_av_std_error,
               std::string(k == 0 ? "uniform" : "optimal") + " N=" + std::to_string(N) +
                   " d=" + std::to_string(d) + ": " + fmt(rep.n_av_p) + " vs " + fmt(exact));
    }
    const double ratio = nav[1] / nav[0];
    const double ratio_se = ratio * std::sqrt(std::pow(se[0] / nav[0], 2) + std::pow(se[1] / nav[1], 2));
    const double exact_ratio =
        exact_nav2(N, d, SamplingDensity::optimal) / exact_nav2(N, d, SamplingDensity::uniform);
    L.expect(std::abs(ratio - exact_ratio) <= 3.0 * ratio_se,
             "improvement ratio d=" + std::to_string(d) + ": " + fmt(ratio) + " vs " + fmt(exact_ratio));
    ratios.push_back(ratio);
    L.note("d=" + std::to_string(d) + ": optimal/uniform " + fmt(ratio, 4) + " +- " + fmt(ratio_se, 2) +
           " (exact " + fmt(exact_ratio, 4) + ", (8/9)^{d/2} = " + fmt(std::pow(8.0 / 9.0, d / 2.0), 4) + ")");
  }
  L.expect(ratios[0] > ratios[1] && ratios[1] > ratios[2], "improvement ratio does not shrink with d");
}

void c_star_rescaling(Ledger& L) {
  const std::pair<std::size_t, std::size_t> cases[] = {{4, 1}, {8, 2}};
  for (const auto& [N, d] : cases) {
    for (auto kind : {SamplingDensity::uniform, SamplingDensity::optimal}) {
      const auto e = c_rescale_effect(N, d, kind, 10000, 4242 + N);
      const std::string label = std::string(kind == SamplingDensity::uniform ? "uniform" : "optimal") +
                                " N=" + std::to_string(N) + " d=" + std::to_string(d);
      L.expect(std::abs(e.ratio - e.c_star) <= 3.0 * e.ratio_se,
               label + ": ratio " + fmt(e.ratio) + " vs c* " + fmt(e.c_star));
      L.note(label + ": ratio " + fmt(e.ratio, 5) + " +- " + fmt(e.ratio_se, 2) + ", c* " + fmt(e.c_star, 5));
    }
  }
}

void asymptotic_probe(Ledger& L) {
  double scaled[2];
  for (int k = 0; k < 2; ++k) {
    const auto kind = k == 0 ? SamplingDensity::uniform : SamplingDensity::optimal;
    const auto probe = asymptotic_scaling_probe(1.0, 1, kind, {4096}, 2000, 777);
    const auto& row = probe.rows.back();
    scaled[k] = row.scaled;
    const std::string label = k == 0 ? "uniform" : "optimal";
    L.expect(row.scaled <= 1.10 * probe.asymptotic_constant,
             label + ": " + fmt(row.scaled) + " vs bound " + fmt(probe.asymptotic_constant));
    L.note(label + ": N^{1/2} n-av_1 = " + fmt(row.scaled, 5) + " +- " + fmt(row.scaled_std_error, 2) +
           ", asymptotic constant " + fmt(probe.asymptotic_constant, 5));
  }
  L.expect(scaled[1] < scaled[0], "optimal density below uniform");
}

void determinism(Ledger& L) {
  ExperimentConfig cfg;
  cfg.p = 1.5;
  cfg.d = 2;
  cfg.N = 8;
  cfg.density_kind = DensityKind::optimal;
  cfg.replications = 300;
  cfg.seed = 99;
  for (std::size_t threads : {1u, 2u, 4u}) {
    cfg.threads = threads;
    const auto a = report_to_json(cfg, run_average_discrepancy(cfg));
    const auto b = report_to_json(cfg, run_average_discrepancy(cfg));
    L.expect(a == b, "rerun with " + std::to_string(threads) + " thread(s) differs");
  }
  cfg.evaluator = Evaluator::monte_carlo;
  cfg.mc_samples = 2000;
  cfg.replications = 20;
  const auto a = report_to_json(cfg, run_average_discrepancy(cfg));
  L.expect(a == report_to_json(cfg, run_average_discrepancy(cfg)), "Monte Carlo evaluator rerun differs");
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "golden constants", 1.0, golden_constants},
      {2, "optimal density correctness", 10.0, density_correctness},
      {3, "functional optimality", 10.0, functional_optimality},
      {4, "evaluator cross-validation", 120.0, evaluator_cross_validation},
      {5, "p=2 expectation identities", 300.0, expectation_identities},
      {6, "c* weight rescaling", 120.0, c_star_rescaling},
      {7, "asymptotic probes d=1 p=1", 600.0, asymptotic_probe},
      {8, "determinism", 60.0, determinism},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    Ledger L;
    const auto start = std::chrono::steady_clock::now();
    std::string exception;
    try {
      c.body(L);
    } catch (const std::exception& e) {
      exception = e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds < c.budget_seconds;
    const bool pass = exception.empty() && L.ok() && in_time;
    if (!pass) ++failed;

    std::printf("[%s] criterion %d: %s (%zu checks, %.2f s, budget %.0f s)\n", pass ? "PASS" : "FAIL",
                c.id, c.title.c_str(), L.checks(), seconds, c.budget_seconds);
    for (const auto& s : L.info()) std::printf("         %s\n", s.c_str());
    if (!exception.empty()) std::printf("         exception: %s\n", exception.c_str());
    if (!in_time) std::printf("         over the time budget\n");
    for (const auto& s : L.notes()) std::printf("         failed: %s\n", s.c_str());
    if (L.failures() > L.notes().size()) {
      std::printf("         ... %zu failures in total\n", L.failures());
    }
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
