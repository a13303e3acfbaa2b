#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace disclab {

enum class DensityForm {
  uniform,
  closed_form_p1,
  closed_form_p2,
  tabulated,         // optimal density for general p, solved on a grid
  tabulated_custom,  // user-supplied (t, rho) samples, piecewise linear
};

struct DensityNode {
  double t;
  double rho;
  double cdf;
};

/// One-dimensional probability density on [0,1] with CDF and inverse CDF.
///
/// Optimal densities are carried internally by the log of the complement
/// w(t) = 1 - rho(t) p/(p+1). On that variable the defining relation
///
///   t = w^{2/p} (1 + 2(1-w)/p)
///
/// is explicit, the CDF has a closed form, and values of rho close to
/// (p+1)/p keep full relative accuracy in their distance from the maximum.
/// Instances are immutable and cheap to copy.
class Density1D {
 public:
  struct Draw {
    double t;
    double rho;
  };

  static Density1D uniform();
  /// Piecewise-linear density through (t_i, rho_i); t must start at 0, end at
  /// 1 and increase strictly. Renormalized to unit mass.
  static Density1D custom(std::vector<double> t, std::vector<double> rho);

  DensityForm form() const noexcept;
  /// Target exponent for optimal densities.
  std::optional<double> p() const noexcept;
  bool is_optimal() const noexcept;

  double value(double t) const;
  double cdf(double t) const;
  double cdf_inverse(double u) const;
  /// Inverse-CDF draw returning the point and the density there.
  Draw draw(double u) const;

  /// w(t) = 1 - rho(t) p/(p+1); optimal densities only.
  double complement(double t) const;
  /// log w(t); -inf at t = 0.
  double log_complement(double t) const;

  /// Tabulation grid (empty for uniform).
  std::span<const DensityNode> table() const noexcept;

  struct Impl;

 private:
  explicit Density1D(std::shared_ptr<const Impl> impl);
  friend Density1D optimal_density(double p);
  friend Density1D tabulated_optimal_density(double p, std::size_t nodes);

  std::shared_ptr<const Impl> impl_;
};

inline constexpr std::size_t kDefaultTabulationNodes = 4096;

/// Optimal marginal for exponent p in [1, 1e6]: closed forms at p = 1 and
/// p = 2, tabulated solver otherwise.
Density1D optimal_density(double p);
/// Always uses the grid solver, including p = 1 and p = 2.
Density1D tabulated_optimal_density(double p,
                                    std::size_t nodes = kDefaultTabulationNodes);

/// t - (1 - rho p/(p+1))^{2/p} (1 + 2 rho/(p+1)).
double residual_eq_rho(double p, double t, double rho);
/// Same relation written in the complement w = 1 - rho p/(p+1):
/// t - w^{2/p} (1 + 2(1-w)/p).
double residual_eq_rho_complement(double p, double t, double w);

/// S(x) = int_0^x 1/rho.
double S_of_x(const Density1D& density, double x);
/// J(rho) = int_0^1 S(x)^{p/2} dx.
double J_functional(const Density1D& density, double p);

struct VariationalSolution {
  double p;
  double S1;
  double mu;
  double lambda2;  // the quantity 2*lambda
  double Jmin;
  double normalization_residual;  // (2 lambda)^2 identity, relative
};

VariationalSolution variational_solution(double p);

/// J as a function of S1 alone once mu and lambda are eliminated. Its
/// derivative vanishes at S1 = (p+2)/(p+1), where it equals J_min; the
/// function keeps decreasing past that point, so it is stationary there
/// rather than minimal. Requires S1 > 1.
double reduced_functional(double p, double S1);

/// CSV columns t,rho,cdf on `grid` equispaced nodes including both ends.
void write_density_csv(std::ostream& os, const Density1D& density,
                       std::size_t grid);
/// Reads t,rho[,cdf] rows (header optional) into a custom density.
Density1D read_density_csv(std::istream& is);

}  // namespace disclab
