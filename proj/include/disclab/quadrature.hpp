#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace disclab::quad {

/// n-point Gauss-Legendre rule on [-1,1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit GaussLegendre(std::size_t n);
};

/// Cached rule; n in [1, 64].
const GaussLegendre& gauss_legendre(std::size_t n);

struct Result {
  double value;
  double abs_error;
  std::size_t evaluations;
};

struct Options {
  double abs_tol = 1e-12;
  double rel_tol = 0.0;
  std::size_t max_intervals = 4000;
};

/// Globally adaptive Gauss-Kronrod (7,15) on [a,b]. Throws
/// Error{integration_failure} on non-finite samples or when the interval
/// budget runs out above tolerance.
Result integrate(const std::function<double(double)>& f, double a, double b,
                 const Options& opts = {});

/// int_0^x f over a sub-range of [0,1]. The piece below 1/2 is taken in
/// t = s^2 and the piece above in t = 1 - u^2, which removes square-root
/// endpoint behaviour at both ends.
Result integrate_unit(const std::function<double(double)>& f, double lo,
                      double hi, const Options& opts = {});

}  // namespace disclab::quad
