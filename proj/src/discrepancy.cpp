#include "disclab/discrepancy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "disclab/error.hpp"
#include "disclab/kernels.hpp"
#include "disclab/quadrature.hpp"
#include "disclab/rng.hpp"
#include "neumaier.hpp"

namespace disclab {

namespace {

// Squared errors down to this far below zero are rounding noise.
constexpr double kClampTolerance = 1e-12;

kernels::PointView view_of(const WeightedPointSet& ps) {
  return {ps.dim(), ps.size(), ps.axes().data(), ps.weights().data()};
}

// Takes the p-th root of an integral of |Delta|^p that may have drifted
// slightly negative.
double root_of_power(double integral, double p, bool& clamped) {
  if (integral < 0.0) {
    if (integral < -kClampTolerance) {
      std::ostringstream msg;
      msg << "integral of |Delta|^p evaluated to " << integral << " (below -1e-12)";
      throw Error(ErrorKind::numerical_inconsistency, msg.str());
    }
    clamped = true;
    return 0.0;
  }
  return std::pow(integral, 1.0 / p);
}

}  // namespace

std::string_view method_name(Method m) noexcept {
  switch (m) {
    case Method::kernel_p2: return "kernel_p2";
    case Method::even_p_exact: return "even_p_exact";
    case Method::cell_quadrature: return "cell_quadrature";
    case Method::monte_carlo: return "monte_carlo";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (Method m : {Method::kernel_p2, Method::even_p_exact, Method::cell_quadrature,
                   Method::monte_carlo}) {
    if (name == method_name(m)) return m;
  }
  throw Error(ErrorKind::invalid_argument, "unknown method '" + std::string(name) + "'");
}

KernelSums kernel_sums(const WeightedPointSet& ps) {
  const std::size_t n = ps.size();
  const std::size_t d = ps.dim();
  const auto weights = ps.weights();
  const auto view = view_of(ps);

  detail::Neumaier linear;
  detail::Neumaier quadratic;
  for (std::size_t k = 0; k < n; ++k) {
    double h = weights[k];
    for (std::size_t j = 0; j < d; ++j) {
      const double x = ps.coord(k, j);
      h *= 0.5 * (1.0 - x * x);
    }
    linear.add(h);
    quadratic.add(weights[k] * kernels::kernel_row_sum(view, k));
  }
  return {power_d(1.0 / 3.0, d), linear.value(), quadratic.value()};
}

DiscrepancyResult l2_discrepancy_kernel(const WeightedPointSet& ps) {
  const KernelSums sums = kernel_sums(ps);
  DiscrepancyResult out;
  out.p = 2.0;
  out.method = Method::kernel_p2;
  out.value = root_of_power(sums.squared_error(), 2.0, out.clamped);
  out.evaluations = static_cast<std::uint64_t>(ps.size()) * ps.size();
  return out;
}

DiscrepancyResult lp_discrepancy_even(const WeightedPointSet& ps, int p) {
  if (p != 2 && p != 4) {
    throw Error(ErrorKind::invalid_argument, "exact expansion supports p = 2 and p = 4 only");
  }
  const std::size_t n = ps.size();
  const std::size_t d = ps.dim();
  const std::size_t limit = p == 2 ? 64 : 16;
  if (n > limit) {
    std::ostringstream msg;
    msg << "exact p=" << p << " expansion limited to N <= " << limit << " (got " << n << ")";
    throw Error(ErrorKind::size_limit, msg.str());
  }
  const auto weights = ps.weights();

  // Delta^p = sum_m C(p,m) (-prod x)^{p-m} (sum_k a_k 1_k)^m. For an ordered
  // m-tuple of points, int prod_j x_j^e 1[max_i t_{k_i,j} < x_j] dx factorizes
  // into prod_j (1 - M_j^{e+1})/(e+1).
  detail::Neumaier total;
  std::uint64_t terms = 0;
  std::vector<double> running_max(static_cast<std::size_t>(p + 1) * d, 0.0);
  for (int m = 0; m <= p; ++m) {
    const int e = p - m;
    double binom = 1.0;
    for (int i = 0; i < m; ++i) binom = binom * (p - i) / (i + 1);
    const double coef = binom * ((e % 2 == 0) ? 1.0 : -1.0);
    const double denom = static_cast<double>(e + 1);

    auto close_term = [&](const double* maxima, double weight) {
      double prod = weight;
      for (std::size_t j = 0; j < d; ++j) {
        prod *= (1.0 - std::pow(maxima[j], e + 1)) / denom;
      }
      total.add(coef * prod);
      ++terms;
    };

    // Depth-first over ordered tuples; level i keeps the coordinate maxima of
    // the first i points.
    auto recurse = [&](auto&& self, int level, double weight) -> void {
      const double* maxima = running_max.data() + static_cast<std::size_t>(level) * d;
      if (level == m) {
        close_term(maxima, weight);
        return;
      }
      double* next = running_max.data() + static_cast<std::size_t>(level + 1) * d;
      for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t j = 0; j < d; ++j) next[j] = std::max(maxima[j], ps.coord(k, j));
        self(self, level + 1, weight * weights[k]);
      }
    };
    recurse(recurse, 0, 1.0);
  }

  DiscrepancyResult out;
  out.p = p;
  out.method = Method::even_p_exact;
  out.value = root_of_power(total.value(), p, out.clamped);
  out.evaluations = terms;
  return out;
}

DiscrepancyResult lp_discrepancy_mc(const WeightedPointSet& ps, double p,
                                    std::uint64_t samples, std::uint64_t seed) {
  Exponent::from_p(p);
  if (samples < 1000) throw Error(ErrorKind::invalid_argument, "Monte Carlo needs >= 1000 samples");
  const std::size_t d = ps.dim();
  const auto view = view_of(ps);
  CounterRng rng(seed, 0);
  std::vector<double> x(d);
  double mean = 0.0;
  double m2 = 0.0;
  for (std::uint64_t i = 0; i < samples; ++i) {
    double volume = 1.0;
    for (std::size_t j = 0; j < d; ++j) {
      x[j] = rng.uniform();
      volume *= x[j];
    }
    const double y = std::pow(std::abs(kernels::weighted_box_count(view, x.data()) - volume), p);
    const double delta = y - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (y - mean);
  }
  const double variance = m2 / static_cast<double>(samples - 1);
  const double se_mean = std::sqrt(variance / static_cast<double>(samples));

  DiscrepancyResult out;
  out.p = p;
  out.method = Method::monte_carlo;
  out.value = std::pow(mean, 1.0 / p);
  out.abs_error_estimate = mean > 0.0 ? std::pow(mean, 1.0 / p - 1.0) * se_mean / p : 0.0;
  out.evaluations = samples;
  return out;
}

KernelConstants c_kernel(const ProductDensity& rho) {
  if (rho.d == 0) throw Error(ErrorKind::invalid_argument, "dimension must be >= 1");
  double one_dim = 0.5;
  if (rho.marginal.form() == DensityForm::tabulated_custom) {
    // (1-t)/rho is smooth on each linear piece as long as rho stays positive
    // before t = 1.
    const auto nodes = rho.marginal.table();
    const auto& rule = quad::gauss_legendre(20);
    detail::Neumaier acc;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
      if (!(nodes[i].rho > 0.0) || (!(nodes[i + 1].rho > 0.0) && nodes[i + 1].t < 1.0)) {
        throw Error(ErrorKind::integration_failure,
                    "divergent integral: density vanishes inside [0,1)");
      }
      const double half = 0.5 * (nodes[i + 1].t - nodes[i].t);
      const double mid = nodes[i].t + half;
      for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        const double t = mid + half * rule.nodes[k];
        acc.add(half * rule.weights[k] * (1.0 - t) / rho.marginal.value(t));
      }
    }
    one_dim = acc.value();
  } else if (rho.kind != ProductDensity::Kind::uniform) {
    const auto& m = rho.marginal;
    auto f = [&](double t) {
      if (t >= 1.0) return 0.0;
      const double r = m.value(t);
      if (!(r > 0.0)) {
        // rho may vanish at t = 1 itself; the quotient tends to 0 there for
        // the optimal marginals.
        if (1.0 - t < 1e-12 && rho.kind == ProductDensity::Kind::optimal) return 0.0;
        throw Error(ErrorKind::integration_failure,
                    "divergent integral: density vanishes inside [0,1)");
      }
      return (1.0 - t) / r;
    };
    one_dim = quad::integrate_unit(f, 0.0, 1.0, {1e-14, 0.0, 4000}).value;
  }
  return {rho.d, power_d(one_dim, rho.d), power_d(1.0 / 3.0, rho.d)};
}

}  // namespace disclab
