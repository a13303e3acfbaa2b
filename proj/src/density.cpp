#include "disclab/density.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>

#include "disclab/error.hpp"
#include "disclab/format.hpp"
#include "disclab/quadrature.hpp"

namespace disclab {

namespace {

constexpr double kMinP = 1.0;
constexpr double kMaxP = 1e6;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr int kMaxSolverIterations = 200;
constexpr double kSolverResidual = 1e-9;
// Width of the layer below t = 1 where S(x) is taken from the closed
// relation S = S1 w^{2/p} instead of quadrature.
constexpr double kBoundaryLayer = 1e-6;

void check_exponent(double p) {
  if (!(p >= kMinP && p <= kMaxP)) {
    std::ostringstream msg;
    msg << "exponent p=" << p << " outside [1, 1e6]";
    throw Error(ErrorKind::invalid_argument, msg.str());
  }
}

void check_unit(double x, const char* what) {
  if (!(x >= 0.0 && x <= 1.0)) {
    std::ostringstream msg;
    msg << what << "=" << x << " outside [0,1]";
    throw Error(ErrorKind::domain_error, msg.str());
  }
}

// Safeguarded Newton for an increasing function g on [lo, hi] with
// g(lo) <= 0 <= g(hi). `g` returns {value, derivative}.
template <class G>
double solve_increasing(G&& g, double lo, double hi, double guess) {
  double x = std::clamp(guess, lo, hi);
  if (!std::isfinite(x)) x = 0.5 * (lo + hi);
  for (int it = 0; it < kMaxSolverIterations; ++it) {
    const auto [v, dv] = g(x);
    if (v == 0.0) return x;
    if (v < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    double next = x - v / dv;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - x);
    x = next;
    if (step <= 2e-16 * std::abs(x) || !(hi - lo > 2e-16 * std::max(std::abs(lo), std::abs(hi)))) {
      break;
    }
  }
  return x;
}

// Optimal density for exponent p in the variable z = log w, where
// w = 1 - rho p/(p+1). Along this parametrization
//   t(z)   = e^{a z} (1 + 2(1-w)/p),      a = 2/p
//   rho(z) = (p+1)/p (1-w)
//   F(z)   = (p+1)/p e^{a z} B(w),        B = (1-w)(1+2(1-w)/p) + w - w^2/(p+1)
// with t, F increasing and rho decreasing in z.
struct OptimalCurve {
  double p;
  double a;
  double scale;

  explicit OptimalCurve(double p_)
      : p(p_), a(2.0 / p_), scale((p_ + 1.0) / p_) {}

  static double one_minus_w(double z) { return -std::expm1(z); }

  double rho(double z) const { return scale * one_minus_w(z); }

  double log_t(double z) const {
    return a * z + std::log1p(2.0 * one_minus_w(z) / p);
  }
  double t(double z) const {
    if (z == kNegInf) return 0.0;
    return std::exp(a * z) * (1.0 + 2.0 * one_minus_w(z) / p);
  }
  double one_minus_t(double z) const { return -std::expm1(log_t(z)); }
  double dt_dz(double z) const {
    return a * (1.0 + a) * std::exp(a * z) * one_minus_w(z);
  }
  // d log t / dz without forming e^{a z}.
  double dlog_t_dz(double z) const {
    const double om = one_minus_w(z);
    return a * (1.0 + a) * om / (1.0 + 2.0 * om / p);
  }

  double bracket_b(double z) const {
    const double om = one_minus_w(z);
    const double w = std::exp(z);
    return om * (1.0 + 2.0 * om / p) + w - w * w / (p + 1.0);
  }
  double cdf(double z) const {
    if (z == kNegInf) return 0.0;
    return scale * std::exp(a * z) * bracket_b(z);
  }
  double log_cdf(double z) const {
    return std::log(scale) + a * z + std::log(bracket_b(z));
  }

  // Since 1 <= 1 + 2(1-w)/p <= 1 + a, log t lies within log(1+a) of a z.
  std::pair<double, double> z_bracket_for_t(double t) const {
    const double lt = std::log(t);
    return {(lt - std::log1p(a)) / a, std::min(0.0, lt / a)};
  }
  // p/(p+1) <= B <= 1 + a gives w^a <= F <= scale (1+a) w^a.
  std::pair<double, double> z_bracket_for_cdf(double u) const {
    const double lu = std::log(u);
    return {(lu - std::log(scale * (1.0 + a))) / a, std::min(0.0, lu / a)};
  }

  double z_of_t(double t, double lo, double hi, double guess) const {
    if (t <= 0.0) return kNegInf;
    if (t >= 1.0) return 0.0;
    if (t <= 0.5) {
      const double lt = std::log(t);
      return solve_increasing(
          [&](double z) { return std::pair{log_t(z) - lt, dlog_t_dz(z)}; },
          lo, hi, guess);
    }
    const double tail = 1.0 - t;
    return solve_increasing(
        [&](double z) { return std::pair{tail - one_minus_t(z), dt_dz(z)}; },
        lo, hi, guess);
  }
  double z_of_t(double t) const {
    if (t <= 0.0) return kNegInf;
    if (t >= 1.0) return 0.0;
    const auto [lo, hi] = z_bracket_for_t(t);
    return z_of_t(t, lo, hi, 0.5 * (lo + hi));
  }

  double z_of_cdf(double u) const {
    if (u <= 0.0) return kNegInf;
    if (u >= 1.0) return 0.0;
    const auto [lo, hi] = z_bracket_for_cdf(u);
    if (u <= 0.5) {
      const double lu = std::log(u);
      return solve_increasing(
          [&](double z) {
            const double om = one_minus_w(z);
            return std::pair{log_cdf(z) - lu,
                             a * (1.0 + a) * om * om / bracket_b(z)};
          },
          lo, hi, 0.5 * (lo + hi));
    }
    return solve_increasing(
        [&](double z) { return std::pair{cdf(z) - u, rho(z) * dt_dz(z)}; },
        lo, hi, 0.5 * (lo + hi));
  }

  // t - t(z), evaluated without forming w so large p does not underflow.
  double residual(double t, double z) const { return t - this->t(z); }
};

double p1_closed_value(double t) {
  return 1.0 + 2.0 * std::cos(std::acos(2.0 * t - 1.0) / 3.0 +
                              4.0 * std::numbers::pi / 3.0);
}

}  // namespace

struct Density1D::Impl {
  DensityForm form = DensityForm::uniform;
  std::optional<OptimalCurve> curve;
  std::vector<DensityNode> nodes;
  std::vector<double> log_w;  // tabulated optimal only, z at each node

  double optimal_z(double t) const {
    if (form == DensityForm::closed_form_p2) {
      if (t <= 0.0) return kNegInf;
      return std::log(t / (1.0 + std::sqrt(1.0 - t)));
    }
    if (form == DensityForm::tabulated) {
      if (t <= 0.0) return kNegInf;
      if (t >= 1.0) return 0.0;
      const auto it = std::upper_bound(
          nodes.begin(), nodes.end(), t,
          [](double v, const DensityNode& n) { return v < n.t; });
      const std::size_t hi = static_cast<std::size_t>(it - nodes.begin());
      const std::size_t lo = hi - 1;
      auto [alo, ahi] = curve->z_bracket_for_t(t);
      const double zlo = std::max(alo, log_w[lo]);
      const double zhi = std::min(ahi, log_w[hi]);
      double guess = 0.5 * (zlo + zhi);
      if (std::isfinite(log_w[lo])) {
        const double f = (t - nodes[lo].t) / (nodes[hi].t - nodes[lo].t);
        guess = log_w[lo] + f * (log_w[hi] - log_w[lo]);
      }
      if (!(zlo <= zhi)) return curve->z_of_t(t);
      return curve->z_of_t(t, zlo, zhi, guess);
    }
    return curve->z_of_t(t);
  }

  // Custom tables: index of the segment containing t.
  std::size_t segment(double t) const {
    const auto it = std::upper_bound(
        nodes.begin(), nodes.end(), t,
        [](double v, const DensityNode& n) { return v < n.t; });
    std::size_t i = static_cast<std::size_t>(it - nodes.begin());
    if (i == 0) return 0;
    return std::min(i - 1, nodes.size() - 2);
  }
};

Density1D::Density1D(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

Density1D Density1D::uniform() {
  auto impl = std::make_shared<Impl>();
  impl->form = DensityForm::uniform;
  return Density1D(std::move(impl));
}

Density1D Density1D::custom(std::vector<double> t, std::vector<double> rho) {
  if (t.size() != rho.size() || t.size() < 2) {
    throw Error(ErrorKind::invalid_argument,
                "custom density needs matching t/rho columns with >= 2 rows");
  }
  if (t.front() != 0.0 || t.back() != 1.0) {
    throw Error(ErrorKind::invalid_argument, "custom density grid must span [0,1]");
  }
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(std::isfinite(rho[i]) && rho[i] >= 0.0)) {
      throw Error(ErrorKind::invalid_argument, "custom density values must be finite and >= 0");
    }
    if (i > 0 && !(t[i] > t[i - 1])) {
      throw Error(ErrorKind::invalid_argument, "custom density grid must increase strictly");
    }
  }
  // Cumulative trapezoid, then rescale so F(1) = 1 exactly.
  std::vector<double> cdf(t.size(), 0.0);
  for (std::size_t i = 1; i < t.size(); ++i) {
    cdf[i] = cdf[i - 1] + 0.5 * (rho[i] + rho[i - 1]) * (t[i] - t[i - 1]);
  }
  const double mass = cdf.back();
  if (!(mass > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "custom density has zero mass");
  }
  auto impl = std::make_shared<Impl>();
  impl->form = DensityForm::tabulated_custom;
  impl->nodes.reserve(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    impl->nodes.push_back({t[i], rho[i] / mass, cdf[i] / mass});
  }
  impl->nodes.back().cdf = 1.0;
  return Density1D(std::move(impl));
}

DensityForm Density1D::form() const noexcept { return impl_->form; }

std::optional<double> Density1D::p() const noexcept {
  if (impl_->curve) return impl_->curve->p;
  return std::nullopt;
}

bool Density1D::is_optimal() const noexcept { return impl_->curve.has_value(); }

std::span<const DensityNode> Density1D::table() const noexcept {
  return impl_->nodes;
}

double Density1D::value(double t) const {
  check_unit(t, "t");
  const Impl& m = *impl_;
  switch (m.form) {
    case DensityForm::uniform:
      return 1.0;
    case DensityForm::closed_form_p1:
      return std::max(0.0, p1_closed_value(t));
    case DensityForm::closed_form_p2:
      return 1.5 * std::sqrt(1.0 - t);
    case DensityForm::tabulated:
      return m.curve->rho(m.optimal_z(t));
    case DensityForm::tabulated_custom: {
      const std::size_t i = m.segment(t);
      const auto& n0 = m.nodes[i];
      const auto& n1 = m.nodes[i + 1];
      const double f = (t - n0.t) / (n1.t - n0.t);
      return n0.rho + f * (n1.rho - n0.rho);
    }
  }
  return 0.0;
}

double Density1D::cdf(double t) const {
  check_unit(t, "t");
  const Impl& m = *impl_;
  switch (m.form) {
    case DensityForm::uniform:
      return t;
    case DensityForm::closed_form_p2:
      return -std::expm1(1.5 * std::log1p(-t));
    case DensityForm::closed_form_p1:
    case DensityForm::tabulated:
      return m.curve->cdf(m.optimal_z(t));
    case DensityForm::tabulated_custom: {
      const std::size_t i = m.segment(t);
      const auto& n0 = m.nodes[i];
      const auto& n1 = m.nodes[i + 1];
      const double tau = t - n0.t;
      const double slope = (n1.rho - n0.rho) / (n1.t - n0.t);
      return n0.cdf + n0.rho * tau + 0.5 * slope * tau * tau;
    }
  }
  return 0.0;
}

Density1D::Draw Density1D::draw(double u) const {
  check_unit(u, "u");
  const Impl& m = *impl_;
  switch (m.form) {
    case DensityForm::uniform:
      return {u, 1.0};
    case DensityForm::closed_form_p2: {
      // F(t) = 1 - (1-t)^{3/2}.
      const double l = std::log1p(-u);
      return {-std::expm1(l * (2.0 / 3.0)), 1.5 * std::exp(l / 3.0)};
    }
    case DensityForm::closed_form_p1:
    case DensityForm::tabulated: {
      const double z = m.curve->z_of_cdf(u);
      return {m.curve->t(z), m.curve->rho(z)};
    }
    case DensityForm::tabulated_custom: {
      if (u >= 1.0) return {1.0, m.nodes.back().rho};
      const auto it = std::upper_bound(
          m.nodes.begin(), m.nodes.end(), u,
          [](double v, const DensityNode& n) { return v < n.cdf; });
      std::size_t i = static_cast<std::size_t>(it - m.nodes.begin());
      i = i == 0 ? 0 : std::min(i - 1, m.nodes.size() - 2);
      const auto& n0 = m.nodes[i];
      const auto& n1 = m.nodes[i + 1];
      const double slope = (n1.rho - n0.rho) / (n1.t - n0.t);
      const double du = u - n0.cdf;
      // Root of n0.rho tau + slope tau^2/2 = du, written without cancellation.
      const double disc = std::max(0.0, n0.rho * n0.rho + 2.0 * slope * du);
      const double denom = n0.rho + std::sqrt(disc);
      double tau = denom > 0.0 ? 2.0 * du / denom : 0.0;
      tau = std::clamp(tau, 0.0, n1.t - n0.t);
      const double t = n0.t + tau;
      return {t, n0.rho + slope * tau};
    }
  }
  return {0.0, 0.0};
}

double Density1D::cdf_inverse(double u) const { return draw(u).t; }

double Density1D::log_complement(double t) const {
  check_unit(t, "t");
  if (!impl_->curve) {
    throw Error(ErrorKind::invalid_argument, "complement is defined for optimal densities only");
  }
  return impl_->optimal_z(t);
}

double Density1D::complement(double t) const { return std::exp(log_complement(t)); }

Density1D optimal_density(double p) {
  check_exponent(p);
  if (p == 1.0 || p == 2.0) {
    auto impl = std::make_shared<Density1D::Impl>();
    impl->form = p == 1.0 ? DensityForm::closed_form_p1 : DensityForm::closed_form_p2;
    impl->curve.emplace(p);
    return Density1D(std::move(impl));
  }
  return tabulated_optimal_density(p, kDefaultTabulationNodes);
}

Density1D tabulated_optimal_density(double p, std::size_t nodes) {
  check_exponent(p);
  if (nodes < 3) throw Error(ErrorKind::invalid_argument, "tabulation needs >= 3 nodes");
  auto impl = std::make_shared<Density1D::Impl>();
  impl->form = DensityForm::tabulated;
  impl->curve.emplace(p);
  const OptimalCurve& curve = *impl->curve;
  impl->nodes.reserve(nodes);
  impl->log_w.reserve(nodes);
  // Chebyshev-Lobatto abscissae, clustered at both ends.
  const double last = static_cast<double>(nodes - 1);
  double prev_z = kNegInf;
  for (std::size_t i = 0; i < nodes; ++i) {
    double t = 0.5 * (1.0 - std::cos(std::numbers::pi * static_cast<double>(i) / last));
    if (i == 0) t = 0.0;
    if (i + 1 == nodes) t = 1.0;
    const double z = curve.z_of_t(t);
    const double res = (t > 0.0 && t < 1.0) ? curve.residual(t, z) : 0.0;
    if (!(std::abs(res) <= kSolverResidual) || z < prev_z) {
      std::ostringstream msg;
      msg << "optimal density solver failed at t=" << format_real(t)
          << " (p=" << p << ", residual " << res << ")";
      throw SolverFailure(t, msg.str());
    }
    prev_z = z;
    impl->log_w.push_back(z);
    impl->nodes.push_back({t, curve.rho(z), curve.cdf(z)});
  }
  return Density1D(std::move(impl));
}

double residual_eq_rho(double p, double t, double rho) {
  if (!(p >= 1.0)) throw Error(ErrorKind::invalid_argument, "p must be >= 1");
  const double top = (p + 1.0) / p;
  // rho = (p+1)/p is the t = 0 endpoint and is admitted.
  if (!(rho >= 0.0) || rho > top) {
    std::ostringstream msg;
    msg << "rho=" << rho << " outside [0, (p+1)/p]";
    throw Error(ErrorKind::domain_error, msg.str());
  }
  const double base = std::max(0.0, 1.0 - rho * p / (p + 1.0));
  return t - std::pow(base, 2.0 / p) * (1.0 + rho * 2.0 / (p + 1.0));
}

double residual_eq_rho_complement(double p, double t, double w) {
  if (!(p >= 1.0)) throw Error(ErrorKind::invalid_argument, "p must be >= 1");
  if (!(w >= 0.0 && w <= 1.0)) throw Error(ErrorKind::domain_error, "complement outside [0,1]");
  return t - std::pow(w, 2.0 / p) * (1.0 + 2.0 * (1.0 - w) / p);
}

namespace {

constexpr quad::Options kInnerQuad{1e-13, 0.0, 4000};
constexpr quad::Options kOuterQuad{1e-11, 0.0, 4000};

double reciprocal(const Density1D& density, double t) {
  const double r = density.value(t);
  if (!(r > 0.0)) {
    std::ostringstream msg;
    msg << "divergent integral: density vanishes at t=" << format_real(t);
    throw Error(ErrorKind::integration_failure, msg.str());
  }
  return 1.0 / r;
}

// int_0^tau 1/(r0 + slope s) ds on one linear piece.
double linear_piece_reciprocal(const DensityNode& n0, const DensityNode& n1, double tau) {
  if (tau <= 0.0) return 0.0;
  if (!(n0.rho > 0.0)) return std::numeric_limits<double>::infinity();
  const double slope = (n1.rho - n0.rho) / (n1.t - n0.t);
  const double x = slope * tau / n0.rho;
  return tau / n0.rho * (x == 0.0 ? 1.0 : std::log1p(x) / x);
}

// S(x) for a piecewise-linear density, exact per piece.
double piecewise_reciprocal(std::span<const DensityNode> nodes, double x) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < nodes.size() && nodes[i].t < x; ++i) {
    total += linear_piece_reciprocal(nodes[i], nodes[i + 1], std::min(x, nodes[i + 1].t) - nodes[i].t);
  }
  return total;
}

[[noreturn]] void divergent(double x) {
  std::ostringstream msg;
  msg << "divergent integral: 1/rho is not integrable up to x=" << format_real(x);
  throw Error(ErrorKind::integration_failure, msg.str());
}

// int_lo^hi 1/rho: exact for piecewise-linear densities, quadrature with the
// analytic boundary layer for optimal ones.
double reciprocal_integral(const Density1D& density, double lo, double hi) {
  if (hi <= lo) return 0.0;
  auto f = [&](double t) { return reciprocal(density, t); };
  if (density.form() == DensityForm::uniform) return hi - lo;
  if (density.form() == DensityForm::tabulated_custom) {
    const double value = piecewise_reciprocal(density.table(), hi) -
                         piecewise_reciprocal(density.table(), lo);
    if (!std::isfinite(value)) divergent(hi);
    return value;
  }
  const double p = *density.p();
  const double edge = 1.0 - kBoundaryLayer;
  double total = 0.0;
  if (lo < edge) total += quad::integrate_unit(f, lo, std::min(hi, edge), kInnerQuad).value;
  if (hi > edge) {
    const double s1 = (p + 2.0) / (p + 1.0);
    const double a = 2.0 / p;
    const double from = std::max(lo, edge);
    total += s1 * (std::exp(a * density.log_complement(hi)) -
                   std::exp(a * density.log_complement(from)));
  }
  return total;
}

}  // namespace

double S_of_x(const Density1D& density, double x) {
  check_unit(x, "x");
  return reciprocal_integral(density, 0.0, x);
}

double J_functional(const Density1D& density, double p) {
  if (!(p >= 1.0)) throw Error(ErrorKind::invalid_argument, "p must be >= 1");
  if (density.form() == DensityForm::tabulated_custom) {
    // S is smooth on each linear piece; Gauss-Legendre piece by piece.
    const auto nodes = density.table();
    const auto& rule = quad::gauss_legendre(20);
    double prefix = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
      const double half = 0.5 * (nodes[i + 1].t - nodes[i].t);
      double piece = 0.0;
      for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        const double tau = half * (1.0 + rule.nodes[k]);
        piece += rule.weights[k] * std::pow(prefix + linear_piece_reciprocal(nodes[i], nodes[i + 1], tau), 0.5 * p);
      }
      total += half * piece;
      prefix += linear_piece_reciprocal(nodes[i], nodes[i + 1], 2.0 * half);
      if (!std::isfinite(prefix) && i + 2 < nodes.size()) divergent(nodes[i + 1].t);
    }
    if (!std::isfinite(total)) divergent(1.0);
    return total;
  }
  const double half = 0.5;
  const double s_half = reciprocal_integral(density, 0.0, half);
  auto integrand = [&](double x) {
    const double s = x <= half ? reciprocal_integral(density, 0.0, x)
                               : s_half + reciprocal_integral(density, half, x);
    return std::pow(s, 0.5 * p);
  };
  return quad::integrate_unit(integrand, 0.0, 1.0, kOuterQuad).value;
}

VariationalSolution variational_solution(double p) {
  check_exponent(p);
  VariationalSolution out{};
  out.p = p;
  const double excess = 1.0 / (p + 1.0);  // S1 - 1
  out.S1 = (p + 2.0) / (p + 1.0);
  const double log_s1 = std::log1p(excess);
  const double s1_half_p = std::exp(0.5 * p * log_s1);
  const double root_p1 = std::sqrt(p + 1.0);
  const double root_excess = std::sqrt(excess);
  out.mu = s1_half_p / (p + 2.0) * (2.0 + p / (root_p1 * root_excess));
  out.lambda2 = p / ((p + 2.0) * root_p1) * (s1_half_p * out.S1) / root_excess;
  out.Jmin = s1_half_p / (p + 1.0);

  // Normalization identity (2 lambda)^2 = mu^2 S1 - 4 mu S1^{p/2+1}/(p+2)
  // + S1^{p+1}/(p+1).
  const double s1_p1 = std::exp((p + 1.0) * log_s1);
  const double rhs = out.mu * out.mu * out.S1 -
                     4.0 * out.mu / (p + 2.0) * s1_half_p * out.S1 +
                     s1_p1 / (p + 1.0);
  const double lhs = out.lambda2 * out.lambda2;
  out.normalization_residual = std::abs(lhs - rhs) / lhs;
  if (!(out.normalization_residual < 1e-10)) {
    std::ostringstream msg;
    msg << "variational normalization identity violated at p=" << p
        << " (relative residual " << out.normalization_residual << ")";
    throw Error(ErrorKind::numerical_inconsistency, msg.str());
  }
  return out;
}

double reduced_functional(double p, double S1) {
  if (!(p >= 1.0)) throw Error(ErrorKind::invalid_argument, "p must be >= 1");
  if (!(S1 > 1.0)) throw Error(ErrorKind::domain_error, "reduced functional needs S1 > 1");
  return std::pow(S1, 0.5 * p) / (p + 2.0) *
         (2.0 - p / std::sqrt(p + 1.0) * std::sqrt(S1 - 1.0));
}

void write_density_csv(std::ostream& os, const Density1D& density, std::size_t grid) {
  if (grid < 2) throw Error(ErrorKind::invalid_argument, "density grid needs >= 2 nodes");
  os << "t,rho,cdf\n";
  const double last = static_cast<double>(grid - 1);
  for (std::size_t i = 0; i < grid; ++i) {
    const double t = i + 1 == grid ? 1.0 : static_cast<double>(i) / last;
    os << format_real(t) << ',' << format_real(density.value(t)) << ','
       << format_real(density.cdf(t)) << '\n';
  }
}

Density1D read_density_csv(std::istream& is) {
  std::vector<double> t, rho;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string_view> cols;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      cols.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (cols.size() < 2) {
      throw Error(ErrorKind::io_error, "density CSV line " + std::to_string(lineno) +
                                           ": expected t,rho[,cdf]");
    }
    if (t.empty() && cols[0] == "t") continue;  // header
    t.push_back(parse_real(cols[0]));
    rho.push_back(parse_real(cols[1]));
  }
  return Density1D::custom(std::move(t), std::move(rho));
}

}  // namespace disclab
