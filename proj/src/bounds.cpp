#include "disclab/bounds.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "disclab/core.hpp"
#include "disclab/error.hpp"
#include "disclab/format.hpp"

namespace disclab {

namespace {

void require_p(double p, double hi) {
  if (!(p >= 1.0 && p <= hi)) {
    std::ostringstream msg;
    msg << "p must lie in [1, " << hi << "], got " << p;
    throw Error(ErrorKind::invalid_argument, msg.str());
  }
}

}  // namespace

double alpha_old(double p) {
  require_p(p, 1e6);
  // log1p keeps the approach to 1 accurate for large p.
  return std::exp(std::log1p(p / (p + 2.0)) / p);
}

double alpha_new(double p) {
  require_p(p, 1e6);
  return std::sqrt((p + 2.0) / (p + 1.0));
}

double default_log_gamma(double x) { return std::lgamma(x); }

double gamma_root(double p, LogGammaFn log_gamma) {
  require_p(p, 1e6);
  return std::exp(log_gamma(0.5 * (p + 1.0)) / p);
}

double gamma_prefactor(double p, LogGammaFn log_gamma) {
  return std::numbers::sqrt2 * std::exp(-std::log(std::numbers::pi) / (2.0 * p)) *
         gamma_root(p, log_gamma);
}

double gamma_prefactor_asymptote(double p) {
  require_p(p, std::numeric_limits<double>::max());
  return std::sqrt(p / (2.0 * std::numbers::e));
}

double asymptotic_constant(double p, std::size_t d, SamplingDensity kind) {
  const double alpha = kind == SamplingDensity::uniform ? alpha_old(p) : alpha_new(p);
  return gamma_prefactor(p) * power_d(alpha, d);
}

BoundsRow bounds_row(double p) {
  require_p(p, 1e6);
  BoundsRow row{};
  row.p = p;
  row.alpha_old = alpha_old(p);
  row.alpha_new = alpha_new(p);
  row.alpha_old_sq = row.alpha_old * row.alpha_old;
  row.alpha_new_sq = (p + 2.0) / (p + 1.0);
  row.gamma_prefactor = gamma_prefactor(p);
  row.init_err_d1 = initial_error(p, 1);
  row.even_p_const = std::cbrt(9.0) * std::pow(2.0, 2.5) * p;
  row.symmetrized_const = std::sqrt(2.0 * p);
  row.even_p_valid = std::fmod(p, 2.0) == 0.0;
  return row;
}

double complexity_estimate(double /*p*/, std::size_t d, double eps, double C_p,
                           double alpha_p) {
  if (!(eps > 0.0 && eps <= 1.0)) throw Error(ErrorKind::invalid_argument, "eps must lie in (0, 1]");
  if (!(C_p > 0.0)) throw Error(ErrorKind::invalid_argument, "C_p must be positive");
  if (!(alpha_p >= 1.0)) throw Error(ErrorKind::invalid_argument, "alpha_p must be >= 1");
  return C_p * C_p * power_d(alpha_p * alpha_p, d) / (eps * eps);
}

std::vector<AlphaPoint> figure_alpha_data(std::span<const double> p_grid) {
  std::vector<AlphaPoint> rows;
  rows.reserve(p_grid.size());
  for (double p : p_grid) {
    require_p(p, 200.0);
    const double a = alpha_old(p);
    rows.push_back({p, a * a, (p + 2.0) / (p + 1.0)});
  }
  return rows;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t steps) {
  if (steps == 0) throw Error(ErrorKind::invalid_argument, "grid needs at least one step");
  if (!(hi >= lo)) throw Error(ErrorKind::invalid_argument, "grid upper end below lower end");
  std::vector<double> grid(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    grid[i] = steps == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
  }
  if (steps > 1) grid.back() = hi;
  return grid;
}

void write_alpha_csv(std::ostream& os, std::span<const AlphaPoint> rows) {
  os << "p,alpha_old_sq,alpha_new_sq\n";
  for (const auto& r : rows) {
    os << format_real(r.p) << ',' << format_real(r.alpha_old_sq) << ','
       << format_real(r.alpha_new_sq) << '\n';
  }
}

void write_bounds_csv(std::ostream& os, std::span<const BoundsRow> rows) {
  os << "p,alpha_old,alpha_new,alpha_old_sq,alpha_new_sq,gamma_prefactor,init_err_d1,"
        "even_p_const,symmetrized_const,even_p_valid\n";
  for (const auto& r : rows) {
    os << format_real(r.p) << ',' << format_real(r.alpha_old) << ',' << format_real(r.alpha_new)
       << ',' << format_real(r.alpha_old_sq) << ',' << format_real(r.alpha_new_sq) << ','
       << format_real(r.gamma_prefactor) << ',' << format_real(r.init_err_d1) << ','
       << format_real(r.even_p_const) << ',' << format_real(r.symmetrized_const) << ','
       << (r.even_p_valid ? "true" : "false") << '\n';
  }
}

}  // namespace disclab
