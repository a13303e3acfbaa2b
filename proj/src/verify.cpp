#include "disclab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "disclab/core.hpp"
#include "disclab/density.hpp"
#include "disclab/discrepancy.hpp"
#include "disclab/error.hpp"
#include "disclab/kernels.hpp"

namespace disclab {

namespace {

constexpr std::string_view kGroups[] = {"p2", "density", "variational", "bounds", "kernel"};

struct Check {
  std::string_view group;
  std::string name;
  double expected;
  double tolerance;
  std::function<double(const VerifyOptions&)> actual;
};

template <class... Parts>
std::string label(const Parts&... parts) {
  std::ostringstream os;
  (os << ... << parts);
  return os.str();
}

WeightedPointSet one_point(double t, double a) {
  const double c[] = {t};
  return WeightedPointSet(1, c, {a});
}

// A fixed, irregular d = 2 rule used by the kernel cross-checks.
WeightedPointSet fixed_rule() {
  std::vector<double> coords;
  std::vector<double> weights;
  for (int k = 0; k < 13; ++k) {
    coords.push_back(std::fmod(0.1 + 0.6180339887498949 * k, 1.0));
    coords.push_back(std::fmod(0.35 + 0.4142135623730951 * k, 1.0));
    weights.push_back(0.05 + 0.01 * (k % 5));
  }
  return WeightedPointSet(2, coords, std::move(weights));
}

std::vector<Check> all_checks() {
  std::vector<Check> c;
  const double third = 1.0 / 3.0;

  c.push_back({"p2", "one-point rule t=1/3 a=2/3", 1.0 / std::sqrt(27.0), 1e-12,
               [=](const VerifyOptions&) {
                 return l2_discrepancy_kernel(one_point(third, 2.0 / 3.0)).value;
               }});
  c.push_back({"p2", "one-point rule t=1/2 a=1", 1.0 / std::sqrt(12.0), 1e-12,
               [](const VerifyOptions&) { return l2_discrepancy_kernel(one_point(0.5, 1.0)).value; }});
  c.push_back({"p2", "C(K_1, optimal p=2)", 4.0 / 9.0, 1e-12,
               [](const VerifyOptions&) { return c_kernel(ProductDensity::optimal(1, 2.0)).C_K; }});
  c.push_back({"p2", "C(K_1, uniform)", 0.5, 1e-12,
               [](const VerifyOptions&) { return c_kernel(ProductDensity::uniform(1)).C_K; }});

  // Reference values from 40-digit evaluation of the defining relation.
  const struct {
    double p, t, rho;
  } rho_goldens[] = {
      {3.0, 0.5, 1.087572294749517128},
      {1.5, 0.25, 1.323861476573819758},
      {10.0, 0.5, 1.086038410713230125},
      {100.0, 0.9, 1.008062440370736378},
      {1.0, 0.3, 1.273485017818864773},
  };
  for (const auto& g : rho_goldens) {
    c.push_back({"density", label("rho*(", g.t, ") p=", g.p),
                 g.rho, 1e-12, [g](const VerifyOptions&) { return optimal_density(g.p).value(g.t); }});
  }
  c.push_back({"density", "rho*(0) p=1", 2.0, 1e-12,
               [](const VerifyOptions&) { return optimal_density(1.0).value(0.0); }});
  c.push_back({"density", "rho*(0) p=2", 1.5, 1e-12,
               [](const VerifyOptions&) { return optimal_density(2.0).value(0.0); }});
  c.push_back({"density", "inverse CDF p=2 at 1/2", 0.370039475052563418, 1e-12,
               [](const VerifyOptions&) { return optimal_density(2.0).cdf_inverse(0.5); }});

  for (double p : {1.0, 2.0, 3.0, 10.0}) {
    c.push_back({"variational", label("S1 p=", p), (p + 2.0) / (p + 1.0),
                 1e-12, [p](const VerifyOptions&) { return variational_solution(p).S1; }});
  }
  c.push_back({"variational", "J_min p=2", 4.0 / 9.0, 1e-12,
               [](const VerifyOptions&) { return variational_solution(2.0).Jmin; }});
  c.push_back({"variational", "normalization identity p=3", 0.0, 1e-10,
               [](const VerifyOptions&) { return variational_solution(3.0).normalization_residual; }});

  c.push_back({"bounds", "alpha_old^2 p=2", 1.5, 1e-12,
               [](const VerifyOptions&) { return std::pow(alpha_old(2.0), 2); }});
  c.push_back({"bounds", "alpha_old^2 p=10", 1.13, 0.005,
               [](const VerifyOptions&) { return std::pow(alpha_old(10.0), 2); }});
  c.push_back({"bounds", "alpha_old^2 p=100", 1.014, 0.002,
               [](const VerifyOptions&) { return std::pow(alpha_old(100.0), 2); }});
  c.push_back({"bounds", "alpha_new p=1", std::sqrt(1.5), 1e-12,
               [](const VerifyOptions&) { return alpha_new(1.0); }});
  // Gamma at 1, 3/2, 2 and 5/2 is elementary.
  c.push_back({"bounds", "gamma prefactor p=1", std::sqrt(2.0 / std::numbers::pi), 1e-12,
               [](const VerifyOptions& o) { return gamma_prefactor(1.0, o.log_gamma); }});
  c.push_back({"bounds", "gamma prefactor p=2", 1.0, 1e-12,
               [](const VerifyOptions& o) { return gamma_prefactor(2.0, o.log_gamma); }});
  c.push_back({"bounds", "gamma prefactor p=3", std::sqrt(2.0) * std::pow(std::numbers::pi, -1.0 / 6.0),
               1e-12, [](const VerifyOptions& o) { return gamma_prefactor(3.0, o.log_gamma); }});
  c.push_back({"bounds", "gamma prefactor p=4",
               std::sqrt(2.0) * std::pow(std::numbers::pi, -0.125) *
                   std::pow(0.75 * std::sqrt(std::numbers::pi), 0.25),
               1e-12, [](const VerifyOptions& o) { return gamma_prefactor(4.0, o.log_gamma); }});

  c.push_back({"kernel", "kernel vs expansion, fixed d=2 rule", 0.0, 1e-12, [](const VerifyOptions&) {
                 const auto ps = fixed_rule();
                 return l2_discrepancy_kernel(ps).value - lp_discrepancy_even(ps, 2).value;
               }});
  c.push_back({"kernel", "kernel vs cells, fixed d=2 rule", 0.0, 1e-10, [](const VerifyOptions&) {
                 const auto ps = fixed_rule();
                 return l2_discrepancy_kernel(ps).value - lp_discrepancy_cells(ps, 2.0).value;
               }});
  c.push_back({"kernel", "scalar vs active ISA row sums", 0.0, 1e-15, [](const VerifyOptions&) {
                 const auto ps = fixed_rule();
                 const kernels::PointView v{ps.dim(), ps.size(), ps.axes().data(), ps.weights().data()};
                 double worst = 0.0;
                 for (std::size_t k = 0; k < ps.size(); ++k) {
                   worst = std::max(worst, std::abs(kernels::scalar::kernel_row_sum(v, k) -
                                                    kernels::kernel_row_sum(v, k)));
                 }
                 return worst;
               }});
  return c;
}

}  // namespace

std::vector<std::string_view> check_groups() { return {std::begin(kGroups), std::end(kGroups)}; }

std::vector<CheckResult> run_checks(std::optional<std::string_view> group,
                                    const VerifyOptions& options) {
  if (group && std::find(std::begin(kGroups), std::end(kGroups), *group) == std::end(kGroups)) {
    throw Error(ErrorKind::invalid_argument, "unknown check group '" + std::string(*group) + "'");
  }
  std::vector<CheckResult> out;
  for (const auto& check : all_checks()) {
    if (group && check.group != *group) continue;
    CheckResult r{std::string(check.group), check.name, check.expected, 0.0, check.tolerance, false};
    try {
      r.actual = check.actual(options);
      r.passed = std::abs(r.actual - r.expected) <= r.tolerance;
    } catch (const std::exception&) {
      r.actual = std::nan("");
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace disclab
