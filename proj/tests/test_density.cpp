#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "disclab/density.hpp"
#include "disclab/error.hpp"
#include "disclab/quadrature.hpp"

using namespace disclab;

namespace {

// Independent reference: bisection on the defining relation in rho itself,
// carried in long double. The right-hand side decreases from 1 at rho = 0
// to 0 at rho = (p+1)/p.
double bisect_rho(double p, double t) {
  using L = long double;
  const L P = p;
  L lo = 0.0L;
  L hi = (P + 1.0L) / P;
  for (int i = 0; i < 200; ++i) {
    const L mid = 0.5L * (lo + hi);
    const L g = std::pow(1.0L - mid * P / (P + 1.0L), 2.0L / P) * (1.0L + 2.0L * mid / (P + 1.0L));
    (g > static_cast<L>(t) ? lo : hi) = mid;
  }
  return static_cast<double>(0.5L * (lo + hi));
}

const double kPGrid[] = {1.0, 1.5, 2.0, 3.0, 10.0, 100.0};

}  // namespace

TEST_CASE("frozen reference values") {
  // 40-digit evaluations of the defining relation.
  CHECK(optimal_density(3.0).value(0.5) == doctest::Approx(1.087572294749517128).epsilon(1e-14));
  CHECK(optimal_density(1.5).value(0.25) == doctest::Approx(1.323861476573819758).epsilon(1e-14));
  CHECK(optimal_density(10.0).value(0.5) == doctest::Approx(1.086038410713230125).epsilon(1e-14));
  CHECK(optimal_density(100.0).value(0.9) == doctest::Approx(1.008062440370736378).epsilon(1e-14));
  CHECK(optimal_density(1.0).value(0.3) == doctest::Approx(1.273485017818864773).epsilon(1e-14));
  CHECK(optimal_density(2.0).cdf_inverse(0.5) == doctest::Approx(0.370039475052563418).epsilon(1e-14));
}

TEST_CASE("solver agrees with an independent bisection") {
  for (double p : {1.5, 3.0, 10.0}) {
    const auto rho = optimal_density(p);
    for (int i = 1; i < 20; ++i) {
      const double t = i / 20.0;
      CAPTURE(p);
      CAPTURE(t);
      CHECK(std::abs(rho.value(t) - bisect_rho(p, t)) < 1e-12);
    }
  }
  const auto rho100 = optimal_density(100.0);
  for (double t : {0.5, 0.75, 0.99}) CHECK(std::abs(rho100.value(t) - bisect_rho(100.0, t)) < 1e-12);
}

TEST_CASE("endpoint values and monotonicity") {
  for (double p : kPGrid) {
    CAPTURE(p);
    const auto rho = optimal_density(p);
    CHECK(rho.value(0.0) == doctest::Approx((p + 1.0) / p).epsilon(1e-14));
    CHECK(rho.value(1.0) == 0.0);
    double prev = rho.value(0.0);
    for (int i = 1; i <= 1000; ++i) {
      const double v = rho.value(i / 1000.0);
      CHECK(v <= prev);
      prev = v;
    }
  }
}

TEST_CASE("closed forms match the grid solver") {
  for (double p : {1.0, 2.0}) {
    const auto closed = optimal_density(p);
    const auto grid = tabulated_optimal_density(p);
    CHECK(closed.form() == (p == 1.0 ? DensityForm::closed_form_p1 : DensityForm::closed_form_p2));
    CHECK(grid.form() == DensityForm::tabulated);
    for (int i = 0; i <= 1000; ++i) {
      const double t = i / 1000.0;
      CHECK(std::abs(closed.value(t) - grid.value(t)) <= 1e-8);
      CHECK(std::abs(closed.cdf(t) - grid.cdf(t)) <= 1e-8);
    }
  }
}

TEST_CASE("p = 2 closed form") {
  const auto rho = optimal_density(2.0);
  CHECK(rho.value(0.64) == doctest::Approx(1.5 * 0.6).epsilon(1e-15));
  CHECK(rho.cdf(0.64) == doctest::Approx(1.0 - std::pow(0.36, 1.5)).epsilon(1e-15));
  CHECK(rho.cdf_inverse(0.784) == doctest::Approx(1.0 - std::pow(0.216, 2.0 / 3.0)).epsilon(1e-14));
}

TEST_CASE("p = 1 trigonometric form") {
  const auto rho = optimal_density(1.0);
  CHECK(rho.value(0.5) == doctest::Approx(1.0).epsilon(1e-14));
  for (double t : {0.1, 0.37, 0.8}) {
    const double r = 1.0 + 2.0 * std::cos(std::acos(2.0 * t - 1.0) / 3.0 + 4.0 * std::numbers::pi / 3.0);
    CHECK(rho.value(t) == doctest::Approx(r).epsilon(1e-13));
  }
}

TEST_CASE("unit mass and consistent CDF") {
  for (double p : kPGrid) {
    CAPTURE(p);
    const auto rho = optimal_density(p);
    auto f = [&](double t) { return rho.value(t); };
    CHECK(quad::integrate_unit(f, 0.0, 1.0, {1e-13, 0.0, 4000}).value == doctest::Approx(1.0).epsilon(1e-11));
    CHECK(rho.cdf(1.0) == doctest::Approx(1.0).epsilon(1e-15));
    for (double t : {0.01, 0.3, 0.77, 0.999}) {
      CHECK(rho.cdf(t) == doctest::Approx(quad::integrate_unit(f, 0.0, t, {1e-13, 0.0, 4000}).value).epsilon(1e-10));
    }
  }
}

TEST_CASE("inverse CDF inverts the CDF") {
  for (double p : kPGrid) {
    const auto rho = optimal_density(p);
    for (double u : {0.0, 1e-9, 0.2, 0.5, 0.9, 0.999999}) {
      const auto d = rho.draw(u);
      CHECK(rho.cdf(d.t) == doctest::Approx(u).epsilon(1e-12));
      CHECK(d.rho == doctest::Approx(rho.value(d.t)).epsilon(1e-12));
    }
  }
}

TEST_CASE("complement representation") {
  const double p = 3.0;
  const auto rho = optimal_density(p);
  for (double t : {0.2, 0.6}) {
    const double w = rho.complement(t);
    CHECK(rho.value(t) == doctest::Approx((p + 1.0) / p * (1.0 - w)).epsilon(1e-13));
    CHECK(std::abs(residual_eq_rho_complement(p, t, w)) < 1e-15);
  }
  CHECK(std::isinf(rho.log_complement(0.0)));
  CHECK_THROWS_AS(Density1D::uniform().complement(0.5), Error);
}

TEST_CASE("residual of the defining relation") {
  CHECK(residual_eq_rho(1.0, 0.0, 2.0) == 0.0);
  CHECK(residual_eq_rho(2.0, 1.0, 0.0) == 0.0);
  CHECK(std::abs(residual_eq_rho(3.0, 0.5, 1.087572294749517128)) < 1e-15);
  try {
    residual_eq_rho(1.0, 0.5, 2.5);
    FAIL("expected a domain error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::domain_error);
  }
}

TEST_CASE("S(x) and the boundary identity") {
  const auto rho2 = optimal_density(2.0);
  for (double x : {0.1, 0.5, 0.99, 1.0}) {
    CHECK(S_of_x(rho2, x) == doctest::Approx(4.0 / 3.0 * (1.0 - std::sqrt(1.0 - x))).epsilon(1e-12));
  }
  for (double p : {1.5, 3.0, 10.0}) {
    const auto rho = optimal_density(p);
    const double S1 = (p + 2.0) / (p + 1.0);
    CHECK(S_of_x(rho, 1.0) == doctest::Approx(S1).epsilon(1e-11));
    const double x = 0.7;
    CHECK(S_of_x(rho, x) == doctest::Approx(S1 * std::pow(rho.complement(x), 2.0 / p)).epsilon(1e-11));
  }
  CHECK(S_of_x(Density1D::uniform(), 0.25) == 0.25);
}

TEST_CASE("the optimal density minimizes J") {
  for (double p : kPGrid) {
    CAPTURE(p);
    const double S1 = (p + 2.0) / (p + 1.0);
    const double jmin = std::pow(S1, p / 2.0) / (p + 1.0);
    CHECK(J_functional(optimal_density(p), p) == doctest::Approx(jmin).epsilon(1e-9));
    const double j_uniform = J_functional(Density1D::uniform(), p);
    CHECK(j_uniform == doctest::Approx(1.0 / (p / 2.0 + 1.0)).epsilon(1e-12));
    CHECK(j_uniform > jmin);
  }
}

TEST_CASE("perturbing the optimal density raises J") {
  for (double p : {1.5, 3.0}) {
    const auto opt = optimal_density(p);
    const double jmin = J_functional(opt, p);
    for (double eps : {0.05, 0.2}) {
      std::vector<double> t;
      std::vector<double> r;
      for (int i = 0; i <= 4000; ++i) {
        t.push_back(i / 4000.0);
        r.push_back((1.0 - eps) * opt.value(t.back()) + eps);
      }
      CAPTURE(p);
      CAPTURE(eps);
      CHECK(J_functional(Density1D::custom(t, r), p) > jmin);
    }
  }
}

TEST_CASE("variational quantities") {
  for (double p : kPGrid) {
    CAPTURE(p);
    const auto v = variational_solution(p);
    const double S1 = (p + 2.0) / (p + 1.0);
    CHECK(v.S1 == doctest::Approx(S1).epsilon(1e-15));
    CHECK(v.mu == doctest::Approx(std::pow(S1, p / 2.0)).epsilon(1e-14));
    CHECK(v.lambda2 == doctest::Approx(p / (p + 1.0) * std::pow(S1, p / 2.0)).epsilon(1e-14));
    CHECK(v.Jmin == doctest::Approx(std::pow(S1, p / 2.0) / (p + 1.0)).epsilon(1e-14));
    CHECK(std::abs(v.normalization_residual) < 1e-10);
    const double at_min = reduced_functional(p, S1);
    CHECK(at_min == doctest::Approx(v.Jmin).epsilon(1e-12));
    // Central difference against the one-sided slope further away.
    const double h = 1e-4 * (S1 - 1.0);
    const double slope_at = (reduced_functional(p, S1 + h) - reduced_functional(p, S1 - h)) / (2.0 * h);
    const double slope_off = (reduced_functional(p, 1.0 + 0.5 * (S1 - 1.0) + h) -
                              reduced_functional(p, 1.0 + 0.5 * (S1 - 1.0) - h)) / (2.0 * h);
    CHECK(std::abs(slope_at) < 1e-6 * std::abs(slope_off));
  }
}

TEST_CASE("custom piecewise-linear densities") {
  // 3(1 - t) before renormalization; normalized it is 2(1 - t).
  const auto rho = Density1D::custom({0.0, 1.0}, {3.0, 0.0});
  CHECK(rho.form() == DensityForm::tabulated_custom);
  CHECK(!rho.p().has_value());
  CHECK(rho.value(0.25) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(rho.cdf(0.25) == doctest::Approx(0.5 - 0.0625).epsilon(1e-15));
  CHECK(rho.cdf_inverse(0.75) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK_THROWS_AS(Density1D::custom({0.0, 0.5}, {1.0, 1.0}), Error);
  CHECK_THROWS_AS(Density1D::custom({0.0, 0.6, 0.5, 1.0}, {1.0, 1.0, 1.0, 1.0}), Error);
  CHECK_THROWS_AS(Density1D::custom({0.0, 1.0}, {0.0, 0.0}), Error);
}

TEST_CASE("CSV export and re-import") {
  const auto rho = optimal_density(3.0);
  std::stringstream buf;
  write_density_csv(buf, rho, 2001);
  const std::string text = buf.str();
  CHECK(text.rfind("t,rho,cdf\n", 0) == 0);
  const auto back = read_density_csv(buf);
  for (double t : {0.1, 0.5, 0.9}) {
    CHECK(back.value(t) == doctest::Approx(rho.value(t)).epsilon(1e-5));
    CHECK(back.cdf(t) == doctest::Approx(rho.cdf(t)).epsilon(1e-5));
  }
}

TEST_CASE("argument checking") {
  CHECK_THROWS_AS(optimal_density(0.5), Error);
  CHECK_THROWS_AS(tabulated_optimal_density(3.0, 2), Error);
  CHECK_THROWS_AS(optimal_density(2.0).value(1.5), Error);
}
