#pragma once

// Generalized L_p discrepancy of a weighted point set,
//   L_p = ( int_{[0,1]^d} |Delta(x)|^p dx )^{1/p},
// evaluated four independent ways so each can check the others.

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "disclab/core.hpp"

namespace disclab {

enum class Method { kernel_p2, even_p_exact, cell_quadrature, monte_carlo };

std::string_view method_name(Method m) noexcept;
/// Accepts the names returned by method_name; throws invalid_argument.
Method parse_method(std::string_view name);

struct DiscrepancyResult {
  double value = 0.0;
  double p = 2.0;
  Method method = Method::kernel_p2;
  double abs_error_estimate = 0.0;
  std::uint64_t evaluations = 0;
  bool clamped = false;  // a slightly negative squared error was set to 0
};

/// The three pieces of the p = 2 worst-case error
///   e^2 = 3^{-d} - 2 sum_k a_k h_d(t_k) + sum_{k,l} a_k a_l K_d(t_k, t_l)
/// with K_1(x,y) = 1 - max(x,y) and h_d(x) = prod_j (1 - x_j^2)/2.
struct KernelSums {
  double init_sq;
  double linear;
  double quadratic;

  /// e^2 after scaling every weight by c.
  double squared_error(double c = 1.0) const noexcept {
    return init_sq - 2.0 * c * linear + c * c * quadratic;
  }
};

KernelSums kernel_sums(const WeightedPointSet& ps);

/// Exact p = 2 evaluation in O(N^2 d).
DiscrepancyResult l2_discrepancy_kernel(const WeightedPointSet& ps);

/// Exact evaluation for p in {2, 4} by multinomial expansion of Delta^p.
/// Size guards: N <= 64 for p = 2, N <= 16 for p = 4.
DiscrepancyResult lp_discrepancy_even(const WeightedPointSet& ps, int p);

inline constexpr int kDefaultCellOrder = 8;

/// Any p >= 1, d <= 4: integrates |c - x_1...x_d|^p over the cells cut out by
/// the point coordinates, where the weighted count c is constant.
DiscrepancyResult lp_discrepancy_cells(const WeightedPointSet& ps, double p,
                                       int order = kDefaultCellOrder);

/// Plain Monte Carlo over x; abs_error_estimate is the standard error of the
/// returned L_p (delta method through the 1/p power).
DiscrepancyResult lp_discrepancy_mc(const WeightedPointSet& ps, double p,
                                    std::uint64_t samples, std::uint64_t seed);

struct KernelConstants {
  std::size_t d;
  double C_K;      // int K_d(t,t)/rho_d(t) dt
  double init_sq;  // 3^{-d}
};

KernelConstants c_kernel(const ProductDensity& rho);

/// ( int |sum_k a_k 1[t_k < x]|^p dx )^{1/p}: the norm of the quadrature
/// rule as a functional on F_{d,q}. Exact, d <= 4.
double rule_norm(const WeightedPointSet& ps, double p);

}  // namespace disclab
