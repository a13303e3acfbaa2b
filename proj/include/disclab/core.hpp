#pragma once

// Shared domain types: weighted point sets in [0,1)^d, Hölder exponents,
// product densities, and the local discrepancy function.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "disclab/density.hpp"

namespace disclab {

/// Hölder pair with 1/p + 1/q = 1. p = 1 maps to q = +inf.
struct Exponent {
  double p;
  double q;

  static Exponent from_p(double p);
};

/// N points in [0,1)^d with non-negative weights a_k.
///
/// Coordinates are stored axis-major: axis(j)[k] is the j-th coordinate of
/// point k. The SIMD kernels consume this layout directly.
class WeightedPointSet {
 public:
  /// `coords` is row-major (point k occupies coords[k*d .. k*d+d)).
  WeightedPointSet(std::size_t d, std::span<const double> coords,
                   std::vector<double> weights);

  /// Equal weights 1/N.
  static WeightedPointSet qmc(std::size_t d, std::span<const double> coords);

  std::size_t dim() const noexcept { return d_; }
  std::size_t size() const noexcept { return weights_.size(); }

  double coord(std::size_t k, std::size_t j) const noexcept {
    return axes_[j * size() + k];
  }
  std::span<const double> axis(std::size_t j) const noexcept {
    return {axes_.data() + j * size(), size()};
  }
  std::span<const double> axes() const noexcept { return axes_; }
  std::span<const double> weights() const noexcept { return weights_; }

  std::vector<double> point(std::size_t k) const;
  /// Row-major copy of all coordinates.
  std::vector<double> row_major() const;

  double total_weight() const noexcept;

  WeightedPointSet with_weights(std::vector<double> weights) const;
  WeightedPointSet scaled(double c) const;

 private:
  WeightedPointSet() = default;
  void validate() const;

  std::size_t d_ = 0;
  std::vector<double> axes_;
  std::vector<double> weights_;
};

/// Tensor-product density rho_d = rho^{(x) d}.
struct ProductDensity {
  enum class Kind { uniform, optimal, custom };

  std::size_t d;
  Density1D marginal;
  Kind kind;

  static ProductDensity uniform(std::size_t d);
  static ProductDensity optimal(std::size_t d, double p);
  static ProductDensity custom(std::size_t d, Density1D marginal);

  double value(std::span<const double> x) const;
};

/// Delta(x) = sum_k a_k 1[t_k in [0,x)] - x_1...x_d. Boxes are half-open, so a
/// point sharing a coordinate with x is not counted.
double discrepancy_function(const WeightedPointSet& ps,
                            std::span<const double> x);

/// (p+1)^{-d/p}, the norm of the integration functional on F_{d,q}.
double initial_error(double p, std::size_t d);

/// base^d: repeated multiplication for d <= 30, exp/log beyond.
double power_d(double base, std::size_t d);

/// Importance-sampling weights a_k = 1/(N rho_d(t_k)).
WeightedPointSet weights_from_density(std::size_t d,
                                      std::span<const double> coords,
                                      const ProductDensity& rho);

// Text format: "d N" header, then one line per point with d coordinates and
// the weight, 17 significant digits.
void write_point_set(std::ostream& os, const WeightedPointSet& ps);
WeightedPointSet read_point_set(std::istream& is);

}  // namespace disclab
