#include "disclab/core.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>

#include "disclab/error.hpp"
#include "disclab/format.hpp"
#include "disclab/kernels.hpp"

namespace disclab {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::unsupported_exponent: return "unsupported-exponent";
    case ErrorKind::degenerate_weight: return "degenerate-weight";
    case ErrorKind::solver_failure: return "solver-failure";
    case ErrorKind::domain_error: return "domain-error";
    case ErrorKind::integration_failure: return "integration-failure";
    case ErrorKind::numerical_inconsistency: return "numerical-inconsistency";
    case ErrorKind::size_limit: return "size-limit";
    case ErrorKind::io_error: return "io-error";
  }
  return "unknown";
}

std::string format_real(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double parse_real(std::string_view token) {
  while (!token.empty() && (token.front() == ' ' || token.front() == '\t')) token.remove_prefix(1);
  while (!token.empty() && (token.back() == ' ' || token.back() == '\t')) token.remove_suffix(1);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
  if (res.ec != std::errc{} || res.ptr != token.data() + token.size() || token.empty()) {
    throw Error(ErrorKind::io_error, "cannot parse number '" + std::string(token) + "'");
  }
  return value;
}

Exponent Exponent::from_p(double p) {
  if (std::isinf(p)) {
    throw Error(ErrorKind::unsupported_exponent, "p = inf (star discrepancy) is not supported");
  }
  if (!(p >= 1.0)) throw Error(ErrorKind::invalid_argument, "exponent p must be >= 1");
  const double q = p == 1.0 ? std::numeric_limits<double>::infinity() : p / (p - 1.0);
  return {p, q};
}

WeightedPointSet::WeightedPointSet(std::size_t d, std::span<const double> coords,
                                   std::vector<double> weights)
    : d_(d), weights_(std::move(weights)) {
  const std::size_t n = weights_.size();
  if (d == 0) throw Error(ErrorKind::invalid_argument, "dimension must be >= 1");
  if (n == 0) throw Error(ErrorKind::invalid_argument, "point set must hold N >= 1 points");
  if (coords.size() != n * d) {
    throw Error(ErrorKind::invalid_argument, "coordinate count does not match d*N");
  }
  axes_.resize(n * d);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < d; ++j) axes_[j * n + k] = coords[k * d + j];
  }
  validate();
}

WeightedPointSet WeightedPointSet::qmc(std::size_t d, std::span<const double> coords) {
  if (d == 0 || coords.size() % d != 0) {
    throw Error(ErrorKind::invalid_argument, "coordinate count is not a multiple of d");
  }
  const std::size_t n = coords.size() / d;
  return WeightedPointSet(d, coords, std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

void WeightedPointSet::validate() const {
  for (double x : axes_) {
    if (!(x >= 0.0 && x < 1.0)) {
      std::ostringstream msg;
      msg << "coordinate " << format_real(x) << " outside [0,1)";
      throw Error(ErrorKind::invalid_argument, msg.str());
    }
  }
  for (double a : weights_) {
    if (!(std::isfinite(a) && a >= 0.0)) {
      std::ostringstream msg;
      msg << "weight " << format_real(a) << " is not finite and non-negative";
      throw Error(ErrorKind::invalid_argument, msg.str());
    }
  }
}

std::vector<double> WeightedPointSet::point(std::size_t k) const {
  std::vector<double> out(d_);
  for (std::size_t j = 0; j < d_; ++j) out[j] = coord(k, j);
  return out;
}

std::vector<double> WeightedPointSet::row_major() const {
  std::vector<double> out(size() * d_);
  for (std::size_t k = 0; k < size(); ++k) {
    for (std::size_t j = 0; j < d_; ++j) out[k * d_ + j] = coord(k, j);
  }
  return out;
}

double WeightedPointSet::total_weight() const noexcept {
  double sum = 0.0;
  for (double a : weights_) sum += a;
  return sum;
}

WeightedPointSet WeightedPointSet::with_weights(std::vector<double> weights) const {
  if (weights.size() != size()) {
    throw Error(ErrorKind::invalid_argument, "weight count does not match N");
  }
  WeightedPointSet out;
  out.d_ = d_;
  out.axes_ = axes_;
  out.weights_ = std::move(weights);
  out.validate();
  return out;
}

WeightedPointSet WeightedPointSet::scaled(double c) const {
  std::vector<double> w(weights_);
  for (double& a : w) a *= c;
  return with_weights(std::move(w));
}

ProductDensity ProductDensity::uniform(std::size_t d) {
  return {d, Density1D::uniform(), Kind::uniform};
}

ProductDensity ProductDensity::optimal(std::size_t d, double p) {
  return {d, optimal_density(p), Kind::optimal};
}

ProductDensity ProductDensity::custom(std::size_t d, Density1D marginal) {
  return {d, std::move(marginal), Kind::custom};
}

double ProductDensity::value(std::span<const double> x) const {
  if (x.size() != d) throw Error(ErrorKind::invalid_argument, "dimension mismatch in density");
  double v = 1.0;
  for (double xj : x) v *= marginal.value(xj);
  return v;
}

double discrepancy_function(const WeightedPointSet& ps, std::span<const double> x) {
  if (x.size() != ps.dim()) {
    throw Error(ErrorKind::invalid_argument, "dimension mismatch between x and point set");
  }
  double volume = 1.0;
  for (double xj : x) {
    if (!(xj >= 0.0 && xj <= 1.0)) throw Error(ErrorKind::domain_error, "x outside [0,1]^d");
    volume *= xj;
  }
  const kernels::PointView view{ps.dim(), ps.size(), ps.axes().data(), ps.weights().data()};
  return kernels::weighted_box_count(view, x.data()) - volume;
}

double power_d(double base, std::size_t d) {
  if (d > 30) return std::exp(static_cast<double>(d) * std::log(base));
  double out = 1.0;
  for (std::size_t i = 0; i < d; ++i) out *= base;
  return out;
}

double initial_error(double p, std::size_t d) {
  const Exponent e = Exponent::from_p(p);
  if (d == 0) throw Error(ErrorKind::invalid_argument, "dimension must be >= 1");
  return power_d(std::pow(e.p + 1.0, -1.0 / e.p), d);
}

WeightedPointSet weights_from_density(std::size_t d, std::span<const double> coords,
                                      const ProductDensity& rho) {
  if (rho.d != d) throw Error(ErrorKind::invalid_argument, "density dimension differs from d");
  if (d == 0 || coords.size() % d != 0 || coords.empty()) {
    throw Error(ErrorKind::invalid_argument, "coordinate count is not a positive multiple of d");
  }
  const std::size_t n = coords.size() / d;
  std::vector<double> weights(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto x = coords.subspan(k * d, d);
    for (double xj : x) {
      if (!(xj >= 0.0 && xj < 1.0)) {
        throw Error(ErrorKind::invalid_argument, "coordinate outside [0,1)");
      }
    }
    const double r = rho.value(x);
    if (!(r > 0.0) || !std::isfinite(r)) {
      std::ostringstream msg;
      msg << "density vanishes at point " << k << "; weight 1/(N rho) undefined";
      throw Error(ErrorKind::degenerate_weight, msg.str());
    }
    weights[k] = 1.0 / (static_cast<double>(n) * r);
  }
  return WeightedPointSet(d, coords, std::move(weights));
}

void write_point_set(std::ostream& os, const WeightedPointSet& ps) {
  os << ps.dim() << ' ' << ps.size() << '\n';
  for (std::size_t k = 0; k < ps.size(); ++k) {
    for (std::size_t j = 0; j < ps.dim(); ++j) os << format_real(ps.coord(k, j)) << ' ';
    os << format_real(ps.weights()[k]) << '\n';
  }
}

WeightedPointSet read_point_set(std::istream& is) {
  std::string tok;
  auto next = [&](const char* what) {
    if (!(is >> tok)) throw Error(ErrorKind::io_error, std::string("point set: missing ") + what);
    return tok;
  };
  const double d_raw = parse_real(next("dimension"));
  const double n_raw = parse_real(next("point count"));
  if (!(d_raw >= 1 && n_raw >= 1) || d_raw != std::floor(d_raw) || n_raw != std::floor(n_raw)) {
    throw Error(ErrorKind::io_error, "point set: header must be 'd N' with positive integers");
  }
  const auto d = static_cast<std::size_t>(d_raw);
  const auto n = static_cast<std::size_t>(n_raw);
  std::vector<double> coords(n * d), weights(n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < d; ++j) coords[k * d + j] = parse_real(next("coordinate"));
    weights[k] = parse_real(next("weight"));
  }
  if (is >> tok) throw Error(ErrorKind::io_error, "point set: trailing data after N points");
  return WeightedPointSet(d, coords, std::move(weights));
}

}  // namespace disclab
