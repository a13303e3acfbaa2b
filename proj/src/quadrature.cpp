#include "disclab/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <queue>
#include <sstream>

#include "disclab/error.hpp"

namespace disclab::quad {

GaussLegendre::GaussLegendre(std::size_t n) : nodes(n), weights(n) {
  if (n == 0) throw Error(ErrorKind::invalid_argument, "Gauss rule needs n >= 1");
  // Newton on P_n from the Chebyshev-like initial guess; roots are symmetric.
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute derivative at the converged root.
    double p0 = 1.0, p1 = x;
    for (std::size_t k = 2; k <= n; ++k) {
      const double kk = static_cast<double>(k);
      const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
      p0 = p1;
      p1 = p2;
    }
    dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) nodes[n / 2] = 0.0;
}

const GaussLegendre& gauss_legendre(std::size_t n) {
  static std::array<std::unique_ptr<GaussLegendre>, 65> cache;
  static std::mutex mu;
  if (n == 0 || n > 64) {
    throw Error(ErrorKind::invalid_argument, "Gauss order must be in [1,64]");
  }
  std::lock_guard lock(mu);
  if (!cache[n]) cache[n] = std::make_unique<GaussLegendre>(n);
  return *cache[n];
}

namespace {

// Kronrod 15 / Gauss 7 abscissae and weights on [-1,1] (QUADPACK qk15).
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kron = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double f1 = f(c - dx);
    const double f2 = f(c + dx);
    kron += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  const double value = kron * h;
  const double err = std::abs((kron - gauss) * h);
  if (!std::isfinite(value)) {
    std::ostringstream msg;
    msg << "non-finite integrand on [" << a << ", " << b << "]";
    throw Error(ErrorKind::integration_failure, msg.str());
  }
  return {a, b, value, err};
}

}  // namespace

Result integrate(const std::function<double(double)>& f, double a, double b,
                 const Options& opts) {
  if (a == b) return {0.0, 0.0, 0};
  std::priority_queue<Segment> heap;
  heap.push(gk15(f, a, b));
  double total = heap.top().value;
  double err = heap.top().error;
  std::size_t evals = 15;
  while (err > std::max(opts.abs_tol, opts.rel_tol * std::abs(total))) {
    if (heap.size() >= opts.max_intervals) {
      std::ostringstream msg;
      msg << "adaptive quadrature on [" << a << ", " << b
          << "] did not converge (error estimate " << err << ")";
      throw Error(ErrorKind::integration_failure, msg.str());
    }
    const Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      throw Error(ErrorKind::integration_failure,
                  "adaptive quadrature exhausted floating-point resolution");
    }
    const Segment left = gk15(f, worst.a, mid);
    const Segment right = gk15(f, mid, worst.b);
    evals += 30;
    heap.push(left);
    heap.push(right);
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
  }
  // Final sum over leaves in a fixed order for reproducibility.
  std::vector<Segment> leaves;
  leaves.reserve(heap.size());
  while (!heap.empty()) {
    leaves.push_back(heap.top());
    heap.pop();
  }
  std::sort(leaves.begin(), leaves.end(),
            [](const Segment& x, const Segment& y) { return x.a < y.a; });
  double sum = 0.0, comp = 0.0, esum = 0.0;
  for (const auto& s : leaves) {
    const double y = s.value - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    esum += s.error;
  }
  return {sum, esum, evals};
}

Result integrate_unit(const std::function<double(double)>& f, double lo,
                      double hi, const Options& opts) {
  if (!(lo >= 0.0 && hi <= 1.0 && lo <= hi)) {
    throw Error(ErrorKind::domain_error, "integrate_unit needs 0 <= lo <= hi <= 1");
  }
  Result out{0.0, 0.0, 0};
  Options half = opts;
  half.abs_tol = 0.5 * opts.abs_tol;
  if (lo < 0.5) {
    const double top = std::min(hi, 0.5);
    const auto r = integrate(
        [&](double s) { return 2.0 * s * f(s * s); }, std::sqrt(lo),
        std::sqrt(top), half);
    out.value += r.value;
    out.abs_error += r.abs_error;
    out.evaluations += r.evaluations;
  }
  if (hi > 0.5) {
    const double bottom = std::max(lo, 0.5);
    const auto r = integrate(
        [&](double u) { return 2.0 * u * f(1.0 - u * u); }, std::sqrt(1.0 - hi),
        std::sqrt(1.0 - bottom), half);
    out.value += r.value;
    out.abs_error += r.abs_error;
    out.evaluations += r.evaluations;
  }
  return out;
}

}  // namespace disclab::quad
