#include <algorithm>
#include <cmath>

#include "disclab/kernels.hpp"

namespace disclab::kernels::scalar {

double weighted_box_count(const PointView& ps, const double* x) {
  double sum = 0.0;
  for (std::size_t k = 0; k < ps.n; ++k) {
    bool inside = true;
    for (std::size_t j = 0; j < ps.d && inside; ++j) inside = ps.axes[j * ps.n + k] < x[j];
    if (inside) sum += ps.weights[k];
  }
  return sum;
}

double kernel_row_sum(const PointView& ps, std::size_t k) {
  // Neumaier summation in index order.
  double sum = 0.0;
  double comp = 0.0;
  for (std::size_t l = 0; l < ps.n; ++l) {
    double prod = ps.weights[l];
    for (std::size_t j = 0; j < ps.d; ++j) {
      const double* axis = ps.axes + j * ps.n;
      prod *= 1.0 - std::max(axis[k], axis[l]);
    }
    const double t = sum + prod;
    if (std::abs(sum) >= std::abs(prod)) {
      comp += (sum - t) + prod;
    } else {
      comp += (prod - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

}  // namespace disclab::kernels::scalar
