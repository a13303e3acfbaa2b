#pragma once

// Seeded Monte Carlo experiments over random importance-sampled point sets.
//
// Replication r draws its coordinates from CounterRng(seed, r), and the
// per-replication values are reduced pairwise in index order, so a report
// depends on the configuration alone and not on the thread count.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "disclab/bounds.hpp"
#include "disclab/core.hpp"
#include "disclab/discrepancy.hpp"

namespace disclab {

enum class DensityKind { uniform, optimal, custom_file };
enum class Evaluator { automatic, kernel_p2, even_p_exact, cell_quadrature, monte_carlo };
enum class CRescale { none, optimal_c };

std::string_view density_kind_name(DensityKind k) noexcept;
std::string_view evaluator_name(Evaluator e) noexcept;
std::string_view c_rescale_name(CRescale c) noexcept;

struct ExperimentConfig {
  double p = 2.0;
  std::size_t d = 1;
  std::size_t N = 1;
  DensityKind density_kind = DensityKind::uniform;
  std::string density_file;  // CSV (t,rho) for custom_file
  std::size_t replications = 1000;
  std::optional<std::uint64_t> seed;
  Evaluator evaluator = Evaluator::automatic;
  CRescale c_rescale = CRescale::none;
  std::uint64_t mc_samples = 100000;
  int cell_order = kDefaultCellOrder;
  std::size_t threads = 0;  // 0: all available, capped by DISCLAB_THREADS

  /// Throws Error{invalid_argument} on any violated field constraint.
  void validate() const;
};

struct ExperimentReport {
  double mean_Lp_p = 0.0;  // estimate of E[L^p]
  double av_p = 0.0;
  double n_av_p = 0.0;
  double std_error = 0.0;  // of mean_Lp_p
  double n_av_std_error = 0.0;
  double scaled = 0.0;  // N^{1/2} n_av_p
  double scaled_std_error = 0.0;
  std::size_t replications_used = 0;
  std::uint64_t resamples = 0;
  std::optional<double> c_star;
  std::uint64_t seed = 0;
  Method method = Method::kernel_p2;
};

/// Evaluator actually used for a config: kernel_p2 at p = 2, cells for
/// d <= 4, Monte Carlo otherwise.
Method resolve_evaluator(const ExperimentConfig& cfg);

/// Sampling density named by the config (reads density_file if needed).
ProductDensity make_density(const ExperimentConfig& cfg);

/// Worker count: `requested` (0 = hardware concurrency) capped by
/// DISCLAB_THREADS and by the amount of work.
std::size_t resolve_threads(std::size_t requested, std::size_t work_items);

/// N i.i.d. points from rho by inverse CDF per coordinate, with weights
/// 1/(N rho(t_k)). Draws hitting rho = 0 are repeated and counted.
WeightedPointSet sample_point_set(const ProductDensity& rho, std::size_t N,
                                  std::uint64_t seed, std::uint64_t stream,
                                  std::uint64_t* resamples = nullptr);

ExperimentReport run_average_discrepancy(const ExperimentConfig& cfg);

/// 3^{d/2} sqrt((C_K - 3^{-d})/N) with C_K = 2^{-d} (uniform) or (4/9)^d
/// (optimal): the exact normalized p = 2 average.
double exact_nav2(std::size_t N, std::size_t d, SamplingDensity kind);

/// c* = N/(N - 1 + 3^d C_K); requires C_K >= 3^{-d}.
double optimal_c_rescale(std::size_t N, std::size_t d, double C_K);

struct CRescaleEffect {
  double c_star;
  double mean_sq_plain;
  double mean_sq_rescaled;
  double ratio;     // mean_sq_rescaled / mean_sq_plain
  double ratio_se;  // delta method on the paired samples
  std::size_t replications;
};

/// p = 2: the same sampled sets evaluated with weights a_k and c* a_k.
CRescaleEffect c_rescale_effect(std::size_t N, std::size_t d, SamplingDensity kind,
                                std::size_t replications, std::uint64_t seed,
                                std::size_t threads = 0);

struct ProbeRow {
  std::size_t N;
  double scaled;
  double scaled_std_error;
};

struct ProbeResult {
  std::vector<ProbeRow> rows;
  double asymptotic_constant;
  /// Largest-N row at most the constant plus three standard errors.
  bool within_bound;
};

/// N^{1/2} n-av_p along an increasing N grid (max 2^16), each N run with
/// the same seed.
ProbeResult asymptotic_scaling_probe(double p, std::size_t d, SamplingDensity kind,
                                     const std::vector<std::size_t>& N_grid,
                                     std::size_t replications, std::uint64_t seed,
                                     std::size_t threads = 0);

struct StabilityMetrics {
  double sum_abs_weights;
  /// max_k a_k prod_j (1 - t_kj)^{1/p}; |a_k f(t_k)| is at most this for
  /// f in the unit ball of F_{d,q}.
  double max_term_bound;
  double rule_norm;  // exact norm of the rule on F_{d,q} (d <= 4)
  double error;      // L_p discrepancy
  double initial_error;
  double triangle_bound;  // error + initial_error >= rule_norm
};

StabilityMetrics stability_metrics(const WeightedPointSet& ps, double p);

/// JSON config, keys as in ExperimentConfig; unknown keys are rejected.
ExperimentConfig parse_config_json(std::string_view text);
std::string config_to_json(const ExperimentConfig& cfg);
/// Report with the config echoed; byte-stable for a fixed input.
std::string report_to_json(const ExperimentConfig& cfg, const ExperimentReport& rep);
std::string report_to_csv(const ExperimentConfig& cfg, const ExperimentReport& rep);

}  // namespace disclab
