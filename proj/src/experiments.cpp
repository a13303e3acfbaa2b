#include "disclab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "disclab/density.hpp"
#include "disclab/error.hpp"
#include "disclab/format.hpp"
#include "disclab/rng.hpp"
#include "parallel.hpp"

namespace disclab {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void invalid(const std::string& what) {
  throw Error(ErrorKind::invalid_argument, what);
}

// A draw landing where rho vanishes is repeated; this many in a row means
// the sampler itself is broken.
constexpr int kMaxConsecutiveResamples = 1000;

struct Moments {
  double mean;
  double variance;  // unbiased
};

Moments moments(std::span<const double> y) {
  const double n = static_cast<double>(y.size());
  const double mean = detail::pairwise_sum(y) / n;
  std::vector<double> dev(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) dev[i] = (y[i] - mean) * (y[i] - mean);
  return {mean, detail::pairwise_sum(dev) / (n - 1.0)};
}

ProductDensity density_of(SamplingDensity kind, std::size_t d, double p) {
  return kind == SamplingDensity::uniform ? ProductDensity::uniform(d)
                                          : ProductDensity::optimal(d, p);
}

// L^p of one sampled set.
double evaluate_power(const WeightedPointSet& ps, const ExperimentConfig& cfg, Method method,
                      std::uint64_t replication) {
  switch (method) {
    case Method::kernel_p2: {
      const double e2 = kernel_sums(ps).squared_error();
      if (e2 < -1e-12) {
        throw Error(ErrorKind::numerical_inconsistency, "negative squared error in replication");
      }
      return std::max(e2, 0.0);
    }
    case Method::even_p_exact:
      return std::pow(lp_discrepancy_even(ps, static_cast<int>(cfg.p)).value, cfg.p);
    case Method::cell_quadrature:
      return std::pow(lp_discrepancy_cells(ps, cfg.p, cfg.cell_order).value, cfg.p);
    case Method::monte_carlo:
      return std::pow(
          lp_discrepancy_mc(ps, cfg.p, cfg.mc_samples, mix64(*cfg.seed ^ mix64(replication))).value,
          cfg.p);
  }
  return 0.0;
}

template <class E>
E parse_enum(const Json& v, std::string_view key, std::initializer_list<E> options,
             std::string_view (*name)(E) noexcept) {
  if (!v.is_string()) invalid("config key '" + std::string(key) + "' must be a string");
  const auto s = v.get<std::string>();
  for (E e : options) {
    if (s == name(e)) return e;
  }
  invalid("config key '" + std::string(key) + "' has unknown value '" + s + "'");
}

double json_real(const Json& v, std::string_view key) {
  if (!v.is_number()) invalid("config key '" + std::string(key) + "' must be a number");
  return v.get<double>();
}

std::uint64_t json_count(const Json& v, std::string_view key) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    invalid("config key '" + std::string(key) + "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

}  // namespace

std::string_view density_kind_name(DensityKind k) noexcept {
  switch (k) {
    case DensityKind::uniform: return "uniform";
    case DensityKind::optimal: return "optimal";
    case DensityKind::custom_file: return "custom-file";
  }
  return "unknown";
}

std::string_view evaluator_name(Evaluator e) noexcept {
  switch (e) {
    case Evaluator::automatic: return "auto";
    case Evaluator::kernel_p2: return "kernel_p2";
    case Evaluator::even_p_exact: return "even_p_exact";
    case Evaluator::cell_quadrature: return "cell_quadrature";
    case Evaluator::monte_carlo: return "monte_carlo";
  }
  return "unknown";
}

std::string_view c_rescale_name(CRescale c) noexcept {
  return c == CRescale::none ? "none" : "optimal_c";
}

void ExperimentConfig::validate() const {
  if (!(p >= 1.0 && p <= 1e6)) invalid("p must lie in [1, 1e6]");
  if (d < 1) invalid("d must be >= 1");
  if (N < 1) invalid("N must be >= 1");
  if (replications < 2) invalid("replications must be >= 2");
  if (density_kind == DensityKind::custom_file && density_file.empty()) {
    invalid("density_kind custom-file needs density_file");
  }
  if (evaluator == Evaluator::kernel_p2 && p != 2.0) invalid("kernel_p2 evaluator needs p = 2");
  if (evaluator == Evaluator::even_p_exact && p != 2.0 && p != 4.0) {
    invalid("even_p_exact evaluator needs p = 2 or p = 4");
  }
  if (cell_order < 2 || cell_order > 32) invalid("cell_order must lie in [2, 32]");
  if (mc_samples < 1000) invalid("mc_samples must be >= 1000");
  if (c_rescale == CRescale::optimal_c && p != 2.0) invalid("optimal_c rescaling is defined for p = 2");
}

Method resolve_evaluator(const ExperimentConfig& cfg) {
  switch (cfg.evaluator) {
    case Evaluator::kernel_p2: return Method::kernel_p2;
    case Evaluator::even_p_exact: return Method::even_p_exact;
    case Evaluator::cell_quadrature: return Method::cell_quadrature;
    case Evaluator::monte_carlo: return Method::monte_carlo;
    case Evaluator::automatic: break;
  }
  if (cfg.p == 2.0) return Method::kernel_p2;
  return cfg.d <= 4 ? Method::cell_quadrature : Method::monte_carlo;
}

ProductDensity make_density(const ExperimentConfig& cfg) {
  switch (cfg.density_kind) {
    case DensityKind::uniform: return ProductDensity::uniform(cfg.d);
    case DensityKind::optimal: return ProductDensity::optimal(cfg.d, cfg.p);
    case DensityKind::custom_file: {
      std::ifstream in(cfg.density_file);
      if (!in) throw Error(ErrorKind::io_error, "cannot open density file '" + cfg.density_file + "'");
      return ProductDensity::custom(cfg.d, read_density_csv(in));
    }
  }
  invalid("unknown density kind");
}

std::size_t resolve_threads(std::size_t requested, std::size_t work_items) {
  std::size_t n = requested;
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("DISCLAB_THREADS")) {
    char* end = nullptr;
    const unsigned long long cap = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && cap > 0) n = std::min<std::size_t>(n, cap);
  }
  return std::max<std::size_t>(1, std::min(n, work_items));
}

WeightedPointSet sample_point_set(const ProductDensity& rho, std::size_t N, std::uint64_t seed,
                                  std::uint64_t stream, std::uint64_t* resamples) {
  if (N < 1) invalid("N must be >= 1");
  const std::size_t d = rho.d;
  CounterRng rng(seed, stream);
  std::vector<double> coords(N * d);
  std::vector<double> weights(N);
  std::uint64_t repeats = 0;
  for (std::size_t k = 0; k < N; ++k) {
    double rho_prod = 1.0;
    for (std::size_t j = 0; j < d; ++j) {
      Density1D::Draw draw{};
      for (int attempt = 0;; ++attempt) {
        draw = rho.marginal.draw(rng.uniform());
        if (draw.rho > 0.0 && draw.t < 1.0) break;
        if (attempt >= kMaxConsecutiveResamples) {
          throw Error(ErrorKind::degenerate_weight, "sampler keeps landing where the density vanishes");
        }
        ++repeats;
      }
      coords[k * d + j] = draw.t;
      rho_prod *= draw.rho;
    }
    weights[k] = 1.0 / (static_cast<double>(N) * rho_prod);
  }
  if (resamples) *resamples += repeats;
  return WeightedPointSet(d, coords, std::move(weights));
}

ExperimentReport run_average_discrepancy(const ExperimentConfig& cfg) {
  cfg.validate();
  if (!cfg.seed) invalid("experiment needs a seed");
  const ProductDensity rho = make_density(cfg);
  const Method method = resolve_evaluator(cfg);
  const std::uint64_t seed = *cfg.seed;

  std::optional<double> c_star;
  if (cfg.c_rescale == CRescale::optimal_c) {
    c_star = optimal_c_rescale(cfg.N, cfg.d, c_kernel(rho).C_K);
  }

  const std::size_t M = cfg.replications;
  std::vector<double> values(M);
  std::vector<std::uint64_t> resamples(M, 0);
  detail::parallel_for(M, resolve_threads(cfg.threads, M), [&](std::size_t r) {
    WeightedPointSet ps = sample_point_set(rho, cfg.N, seed, r, &resamples[r]);
    if (c_star) ps = ps.scaled(*c_star);
    values[r] = evaluate_power(ps, cfg, method, r);
  });

  const Moments m = moments(values);
  ExperimentReport rep;
  rep.seed = seed;
  rep.method = method;
  rep.c_star = c_star;
  rep.replications_used = M;
  for (auto n : resamples) rep.resamples += n;
  rep.mean_Lp_p = m.mean;
  rep.std_error = std::sqrt(m.variance / static_cast<double>(M));
  const double p = cfg.p;
  const double norm = 1.0 / initial_error(p, cfg.d);
  rep.av_p = std::pow(m.mean, 1.0 / p);
  rep.n_av_p = norm * rep.av_p;
  rep.n_av_std_error =
      m.mean > 0.0 ? norm * std::pow(m.mean, 1.0 / p - 1.0) * rep.std_error / p : 0.0;
  const double root_n = std::sqrt(static_cast<double>(cfg.N));
  rep.scaled = root_n * rep.n_av_p;
  rep.scaled_std_error = root_n * rep.n_av_std_error;
  return rep;
}

double exact_nav2(std::size_t N, std::size_t d, SamplingDensity kind) {
  if (N < 1 || d < 1) invalid("N and d must be >= 1");
  const double C = kind == SamplingDensity::uniform ? power_d(0.5, d) : power_d(4.0 / 9.0, d);
  const double init_sq = power_d(1.0 / 3.0, d);
  return std::sqrt((C - init_sq) / (init_sq * static_cast<double>(N)));
}

double optimal_c_rescale(std::size_t N, std::size_t d, double C_K) {
  if (N < 1 || d < 1) invalid("N and d must be >= 1");
  const double scaled_C = power_d(3.0, d) * C_K;
  // Relative slack for C_K computed by quadrature at exactly 3^{-d}.
  if (!(scaled_C >= 1.0 - 1e-12)) invalid("C_K must be >= 3^{-d}");
  return static_cast<double>(N) / (static_cast<double>(N) - 1.0 + scaled_C);
}

CRescaleEffect c_rescale_effect(std::size_t N, std::size_t d, SamplingDensity kind,
                                std::size_t replications, std::uint64_t seed,
                                std::size_t threads) {
  if (replications < 2) invalid("replications must be >= 2");
  const ProductDensity rho = density_of(kind, d, 2.0);
  const double c_star = optimal_c_rescale(N, d, c_kernel(rho).C_K);

  const std::size_t M = replications;
  std::vector<double> plain(M);
  std::vector<double> rescaled(M);
  detail::parallel_for(M, resolve_threads(threads, M), [&](std::size_t r) {
    const KernelSums sums = kernel_sums(sample_point_set(rho, N, seed, r));
    plain[r] = sums.squared_error(1.0);
    rescaled[r] = sums.squared_error(c_star);
  });

  const Moments mp = moments(plain);
  const Moments mr = moments(rescaled);
  std::vector<double> cross(M);
  for (std::size_t r = 0; r < M; ++r) cross[r] = (plain[r] - mp.mean) * (rescaled[r] - mr.mean);
  const double cov = detail::pairwise_sum(cross) / (static_cast<double>(M) - 1.0);

  CRescaleEffect out{};
  out.c_star = c_star;
  out.mean_sq_plain = mp.mean;
  out.mean_sq_rescaled = mr.mean;
  out.ratio = mr.mean / mp.mean;
  const double R = out.ratio;
  const double var_ratio =
      (mr.variance - 2.0 * R * cov + R * R * mp.variance) / (mp.mean * mp.mean);
  out.ratio_se = std::sqrt(std::max(var_ratio, 0.0) / static_cast<double>(M));
  out.replications = M;
  return out;
}

ProbeResult asymptotic_scaling_probe(double p, std::size_t d, SamplingDensity kind,
                                     const std::vector<std::size_t>& N_grid,
                                     std::size_t replications, std::uint64_t seed,
                                     std::size_t threads) {
  if (N_grid.empty()) invalid("N grid is empty");
  for (std::size_t i = 0; i < N_grid.size(); ++i) {
    if (N_grid[i] < 1 || (i > 0 && N_grid[i] <= N_grid[i - 1])) invalid("N grid must increase");
  }
  if (N_grid.back() > (1u << 16)) invalid("N grid is limited to 2^16");

  ProbeResult out;
  out.asymptotic_constant = asymptotic_constant(p, d, kind);
  ExperimentConfig cfg;
  cfg.p = p;
  cfg.d = d;
  cfg.density_kind = kind == SamplingDensity::uniform ? DensityKind::uniform : DensityKind::optimal;
  cfg.replications = replications;
  cfg.seed = seed;
  cfg.threads = threads;
  for (std::size_t N : N_grid) {
    cfg.N = N;
    const ExperimentReport rep = run_average_discrepancy(cfg);
    out.rows.push_back({N, rep.scaled, rep.scaled_std_error});
  }
  const ProbeRow& last = out.rows.back();
  out.within_bound = last.scaled <= out.asymptotic_constant + 3.0 * last.scaled_std_error;
  return out;
}

StabilityMetrics stability_metrics(const WeightedPointSet& ps, double p) {
  Exponent::from_p(p);
  const std::size_t d = ps.dim();
  const auto weights = ps.weights();
  StabilityMetrics out{};
  double sum = 0.0;
  double max_term = 0.0;
  for (std::size_t k = 0; k < ps.size(); ++k) {
    sum += std::abs(weights[k]);
    double tail = 1.0;
    for (std::size_t j = 0; j < d; ++j) tail *= 1.0 - ps.coord(k, j);
    max_term = std::max(max_term, std::abs(weights[k]) * std::pow(tail, 1.0 / p));
  }
  out.sum_abs_weights = sum;
  out.max_term_bound = max_term;
  out.rule_norm = rule_norm(ps, p);
  out.error = p == 2.0 ? l2_discrepancy_kernel(ps).value : lp_discrepancy_cells(ps, p).value;
  out.initial_error = initial_error(p, d);
  out.triangle_bound = out.error + out.initial_error;
  return out;
}

ExperimentConfig parse_config_json(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    invalid(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) invalid("config must be a JSON object");

  ExperimentConfig cfg;
  for (const auto& [key, v] : j.items()) {
    if (key == "p") {
      cfg.p = json_real(v, key);
    } else if (key == "d") {
      cfg.d = json_count(v, key);
    } else if (key == "N") {
      cfg.N = json_count(v, key);
    } else if (key == "density_kind") {
      cfg.density_kind = parse_enum(
          v, key, {DensityKind::uniform, DensityKind::optimal, DensityKind::custom_file},
          density_kind_name);
    } else if (key == "density_file") {
      if (!v.is_string()) invalid("config key 'density_file' must be a string");
      cfg.density_file = v.get<std::string>();
    } else if (key == "replications") {
      cfg.replications = json_count(v, key);
    } else if (key == "seed") {
      cfg.seed = json_count(v, key);
    } else if (key == "evaluator") {
      cfg.evaluator = parse_enum(v, key,
                                 {Evaluator::automatic, Evaluator::kernel_p2,
                                  Evaluator::even_p_exact, Evaluator::cell_quadrature,
                                  Evaluator::monte_carlo},
                                 evaluator_name);
    } else if (key == "c_rescale") {
      cfg.c_rescale = parse_enum(v, key, {CRescale::none, CRescale::optimal_c}, c_rescale_name);
    } else if (key == "mc_samples") {
      cfg.mc_samples = json_count(v, key);
    } else if (key == "cell_order") {
      cfg.cell_order = static_cast<int>(std::min<std::uint64_t>(json_count(v, key), 1000));
    } else if (key == "threads") {
      cfg.threads = json_count(v, key);
    } else {
      invalid("unknown config key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

namespace {

Json config_json(const ExperimentConfig& cfg) {
  Json j;
  j["p"] = cfg.p;
  j["d"] = cfg.d;
  j["N"] = cfg.N;
  j["density_kind"] = density_kind_name(cfg.density_kind);
  if (cfg.density_kind == DensityKind::custom_file) j["density_file"] = cfg.density_file;
  j["replications"] = cfg.replications;
  if (cfg.seed) j["seed"] = *cfg.seed;
  j["evaluator"] = evaluator_name(cfg.evaluator);
  j["c_rescale"] = c_rescale_name(cfg.c_rescale);
  j["mc_samples"] = cfg.mc_samples;
  j["cell_order"] = cfg.cell_order;
  j["threads"] = cfg.threads;
  return j;
}

}  // namespace

std::string config_to_json(const ExperimentConfig& cfg) { return config_json(cfg).dump(2); }

std::string report_to_json(const ExperimentConfig& cfg, const ExperimentReport& rep) {
  Json r;
  r["seed"] = rep.seed;
  r["method"] = method_name(rep.method);
  r["mean_Lp_p"] = rep.mean_Lp_p;
  r["av_p"] = rep.av_p;
  r["n_av_p"] = rep.n_av_p;
  r["std_error"] = rep.std_error;
  r["n_av_std_error"] = rep.n_av_std_error;
  r["scaled"] = rep.scaled;
  r["scaled_std_error"] = rep.scaled_std_error;
  r["replications_used"] = rep.replications_used;
  r["resamples"] = rep.resamples;
  if (rep.c_star) r["c_star"] = *rep.c_star;
  Json out;
  out["config"] = config_json(cfg);
  out["report"] = std::move(r);
  return out.dump(2) + "\n";
}

std::string report_to_csv(const ExperimentConfig& cfg, const ExperimentReport& rep) {
  std::ostringstream os;
  os << "p,d,N,density_kind,method,replications,seed,mean_Lp_p,av_p,n_av_p,std_error,"
        "n_av_std_error,scaled,scaled_std_error,resamples,c_star\n";
  os << format_real(cfg.p) << ',' << cfg.d << ',' << cfg.N << ','
     << density_kind_name(cfg.density_kind) << ',' << method_name(rep.method) << ','
     << rep.replications_used << ',' << rep.seed << ',' << format_real(rep.mean_Lp_p) << ','
     << format_real(rep.av_p) << ',' << format_real(rep.n_av_p) << ','
     << format_real(rep.std_error) << ',' << format_real(rep.n_av_std_error) << ','
     << format_real(rep.scaled) << ',' << format_real(rep.scaled_std_error) << ','
     << rep.resamples << ',' << (rep.c_star ? format_real(*rep.c_star) : std::string()) << '\n';
  return os.str();
}

}  // namespace disclab
