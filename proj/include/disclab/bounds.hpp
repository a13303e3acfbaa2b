#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace disclab {

/// ((2p+2)/(p+2))^{1/p}: growth rate per dimension of the normalized average
/// discrepancy under uniform sampling.
double alpha_old(double p);
/// ((p+2)/(p+1))^{1/2}: the same rate under the optimal density.
double alpha_new(double p);

/// log-Gamma implementation used by the prefactor; replaceable so the
/// verification suite can be exercised against a faulty one.
using LogGammaFn = double (*)(double);
double default_log_gamma(double x);

/// Gamma((p+1)/2)^{1/p}.
double gamma_root(double p, LogGammaFn log_gamma = default_log_gamma);
/// sqrt(2) pi^{-1/(2p)} Gamma((p+1)/2)^{1/p}.
double gamma_prefactor(double p, LogGammaFn log_gamma = default_log_gamma);
/// sqrt(p/(2e)), the large-p behaviour of gamma_root.
double gamma_prefactor_asymptote(double p);

enum class SamplingDensity { uniform, optimal };

/// Large-N limit bound of N^{1/2} n-av_p: gamma_prefactor(p) times
/// alpha_old^d (uniform) or alpha_new^d (optimal).
double asymptotic_constant(double p, std::size_t d, SamplingDensity kind);

struct BoundsRow {
  double p;
  double alpha_old;
  double alpha_new;
  double alpha_old_sq;
  double alpha_new_sq;
  double gamma_prefactor;
  double init_err_d1;
  double even_p_const;       // 3^{2/3} 2^{5/2} p
  double symmetrized_const;  // sqrt(2p)
  bool even_p_valid;  // both constants are proven bounds only for even p
};

/// p in [1, 1e6].
BoundsRow bounds_row(double p);

/// Point count C^2 alpha^{2d} eps^{-2} sufficient for average error eps.
/// eps in (0, 1], C > 0, alpha >= 1. `p` only labels the estimate.
double complexity_estimate(double p, std::size_t d, double eps, double C_p,
                           double alpha_p);

struct AlphaPoint {
  double p;
  double alpha_old_sq;
  double alpha_new_sq;
};

/// p_grid within [1, 200].
std::vector<AlphaPoint> figure_alpha_data(std::span<const double> p_grid);

/// Inclusive linear grid; steps >= 1.
std::vector<double> linear_grid(double lo, double hi, std::size_t steps);

void write_alpha_csv(std::ostream& os, std::span<const AlphaPoint> rows);
void write_bounds_csv(std::ostream& os, std::span<const BoundsRow> rows);

}  // namespace disclab
