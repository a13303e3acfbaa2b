// Cell decomposition of [0,1]^d for fixed point sets.
//
// The grid lines on axis j are the distinct coordinates t_kj together with 0
// and 1. On the open cell with lower corner g[i] the weighted count is
// constant: t_kj < x_j holds exactly when t_kj <= g_j[i_j].

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <vector>

#include "disclab/discrepancy.hpp"
#include "disclab/error.hpp"
#include "disclab/quadrature.hpp"
#include "neumaier.hpp"

namespace disclab {

namespace {

constexpr std::size_t kMaxCellDim = 4;
constexpr double kMaxCells = 1e7;

struct CellGrid {
  std::size_t d = 0;
  std::array<std::vector<double>, kMaxCellDim> lines;
  std::array<std::size_t, kMaxCellDim> extent{};  // cells per axis
  std::vector<double> count;                       // weighted count per cell
  std::size_t cells = 0;
};

CellGrid build_grid(const WeightedPointSet& ps) {
  CellGrid g;
  g.d = ps.dim();
  const std::size_t n = ps.size();
  if (g.d > kMaxCellDim) {
    throw Error(ErrorKind::size_limit, "cell decomposition supports d <= 4");
  }
  double total = 1.0;
  for (std::size_t j = 0; j < g.d; ++j) {
    auto& line = g.lines[j];
    const auto axis = ps.axis(j);
    line.assign(axis.begin(), axis.end());
    line.push_back(0.0);
    line.push_back(1.0);
    std::sort(line.begin(), line.end());
    line.erase(std::unique(line.begin(), line.end()), line.end());
    g.extent[j] = line.size() - 1;
    total *= static_cast<double>(g.extent[j]);
  }
  if (total > kMaxCells) {
    std::ostringstream msg;
    msg << "cell decomposition needs " << total << " cells (limit 1e7)";
    throw Error(ErrorKind::size_limit, msg.str());
  }
  g.cells = static_cast<std::size_t>(total);
  g.count.assign(g.cells, 0.0);

  // Row-major cell index with axis 0 slowest.
  std::array<std::size_t, kMaxCellDim> stride{};
  std::size_t s = 1;
  for (std::size_t j = g.d; j-- > 0;) {
    stride[j] = s;
    s *= g.extent[j];
  }
  const auto weights = ps.weights();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t idx = 0;
    for (std::size_t j = 0; j < g.d; ++j) {
      const auto& line = g.lines[j];
      const auto pos = std::lower_bound(line.begin(), line.end(), ps.coord(k, j)) - line.begin();
      idx += static_cast<std::size_t>(pos) * stride[j];
    }
    g.count[idx] += weights[k];
  }
  // Inclusive prefix sum along each axis in turn.
  for (std::size_t j = 0; j < g.d; ++j) {
    for (std::size_t idx = 0; idx < g.cells; ++idx) {
      if ((idx / stride[j]) % g.extent[j] != 0) g.count[idx] += g.count[idx - stride[j]];
    }
  }
  return g;
}

// int_a^b |c - P x|^p dx with c, P >= 0.
double inner_integral(double c, double P, double a, double b, double p) {
  if (!(b > a)) return 0.0;
  if (P == 0.0) return (b - a) * std::pow(c, p);
  // Integral of y^p over a segment of y = |c - P x| that does not cross 0,
  // from its larger end `top` down by `drop`.
  auto one_sided = [p, P](double top, double drop) {
    if (top <= 0.0) return 0.0;
    const double ratio = std::min(1.0, drop / top);
    return std::pow(top, p + 1.0) * -std::expm1((p + 1.0) * std::log1p(-ratio)) /
           (P * (p + 1.0));
  };
  const double root = c / P;
  double sum = 0.0;
  if (root > a) {  // c - P x >= 0 on [a, min(b, root)]
    const double e = std::min(b, root);
    sum += one_sided(c - P * a, P * (e - a));
  }
  if (root < b) {  // P x - c >= 0 on [max(a, root), b]
    const double s = std::max(a, root);
    sum += one_sided(P * b - c, P * (b - s));
  }
  return sum;
}

class CellIntegrator {
 public:
  CellIntegrator(std::size_t d, double p, int order)
      : d_(d), p_(p), rule_(quad::gauss_legendre(static_cast<std::size_t>(order))) {}

  // Returns {base, refined}; the refined pass bisects every smooth piece.
  std::pair<double, double> integrate(double c, const double* lo, const double* hi,
                                      bool refine) {
    lo_ = lo;
    hi_ = hi;
    c_ = c;
    // vertex_products_[j] lists products of lo/hi over the axes after j.
    for (std::size_t j = d_; j-- > 0;) {
      auto& v = vertex_products_[j];
      v.clear();
      if (j + 1 == d_) {
        v.push_back(1.0);
      } else {
        for (double w : vertex_products_[j + 1]) {
          v.push_back(w * lo_[j + 1]);
          v.push_back(w * hi_[j + 1]);
        }
      }
    }
    const double base = level(0, 1.0, 1);
    const double refined = refine ? level(0, 1.0, 2) : base;
    return {base, refined};
  }

 private:
  double level(std::size_t j, double P, int split) {
    if (j + 1 == d_) return inner_integral(c_, P, lo_[j], hi_[j], p_);

    std::array<double, 2 + (1u << (kMaxCellDim - 1))> cuts{};
    std::size_t n_cuts = 0;
    cuts[n_cuts++] = lo_[j];
    if (c_ > 0.0 && P > 0.0) {
      for (double w : vertex_products_[j]) {
        if (w <= 0.0) continue;
        const double x = c_ / (P * w);
        if (x > lo_[j] && x < hi_[j]) cuts[n_cuts++] = x;
      }
    }
    cuts[n_cuts++] = hi_[j];
    std::sort(cuts.begin(), cuts.begin() + static_cast<std::ptrdiff_t>(n_cuts));

    detail::Neumaier acc;
    for (std::size_t s = 0; s + 1 < n_cuts; ++s) {
      const double piece = (cuts[s + 1] - cuts[s]) / split;
      if (!(piece > 0.0)) continue;
      for (int h = 0; h < split; ++h) {
        const double a = cuts[s] + h * piece;
        const double half = 0.5 * piece;
        const double mid = a + half;
        for (std::size_t i = 0; i < rule_.nodes.size(); ++i) {
          const double x = mid + half * rule_.nodes[i];
          acc.add(half * rule_.weights[i] * level(j + 1, P * x, split));
        }
      }
    }
    return acc.value();
  }

  std::size_t d_;
  double p_;
  const quad::GaussLegendre& rule_;
  const double* lo_ = nullptr;
  const double* hi_ = nullptr;
  double c_ = 0.0;
  std::array<std::vector<double>, kMaxCellDim> vertex_products_;
};

// Visits every cell in row-major order with its corners and count.
template <class Fn>
void for_each_cell(const CellGrid& g, Fn&& fn) {
  std::array<std::size_t, kMaxCellDim> idx{};
  std::array<double, kMaxCellDim> lo{};
  std::array<double, kMaxCellDim> hi{};
  for (std::size_t cell = 0; cell < g.cells; ++cell) {
    for (std::size_t j = 0; j < g.d; ++j) {
      lo[j] = g.lines[j][idx[j]];
      hi[j] = g.lines[j][idx[j] + 1];
    }
    fn(g.count[cell], lo.data(), hi.data());
    for (std::size_t j = g.d; j-- > 0;) {
      if (++idx[j] < g.extent[j]) break;
      idx[j] = 0;
    }
  }
}

}  // namespace

DiscrepancyResult lp_discrepancy_cells(const WeightedPointSet& ps, double p, int order) {
  Exponent::from_p(p);
  if (!std::isfinite(p)) throw Error(ErrorKind::unsupported_exponent, "p must be finite");
  if (order < 2 || order > 32) {
    throw Error(ErrorKind::invalid_argument, "Gauss order must lie in [2, 32]");
  }
  const CellGrid grid = build_grid(ps);
  const std::size_t d = grid.d;
  CellIntegrator integrator(d, p, order);

  detail::Neumaier total;
  detail::Neumaier error;
  std::uint64_t evaluations = 0;
  for_each_cell(grid, [&](double c, const double* lo, const double* hi) {
    double lo_vol = 1.0;
    double hi_vol = 1.0;
    for (std::size_t j = 0; j < d; ++j) {
      lo_vol *= lo[j];
      hi_vol *= hi[j];
    }
    if (c == 0.0) {
      double v = 1.0;
      for (std::size_t j = 0; j < d; ++j) {
        v *= (std::pow(hi[j], p + 1.0) - std::pow(lo[j], p + 1.0)) / (p + 1.0);
      }
      total.add(v);
      ++evaluations;
      return;
    }
    const bool sign_change = lo_vol < c && c < hi_vol;
    const auto [base, refined] = integrator.integrate(c, lo, hi, sign_change);
    total.add(refined);
    if (sign_change) error.add(std::abs(refined - base));
    evaluations += sign_change ? 3 : 1;
  });

  DiscrepancyResult out;
  out.p = p;
  out.method = Method::cell_quadrature;
  const double integral = total.value();
  out.value = integral > 0.0 ? std::pow(integral, 1.0 / p) : 0.0;
  const double err = error.value();
  out.abs_error_estimate = integral > 0.0 ? std::pow(integral, 1.0 / p - 1.0) * err / p : err;
  out.evaluations = evaluations;
  return out;
}

double rule_norm(const WeightedPointSet& ps, double p) {
  Exponent::from_p(p);
  const CellGrid grid = build_grid(ps);
  detail::Neumaier total;
  for_each_cell(grid, [&](double c, const double* lo, const double* hi) {
    if (c == 0.0) return;
    double vol = 1.0;
    for (std::size_t j = 0; j < grid.d; ++j) vol *= hi[j] - lo[j];
    total.add(std::pow(c, p) * vol);
  });
  return std::pow(total.value(), 1.0 / p);
}

}  // namespace disclab
