#include "rmflab/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "rmflab/barriers.hpp"
#include "rmflab/euler.hpp"
#include "rmflab/kahan.hpp"
#include "rmflab/moments.hpp"
#include "rmflab/ntcore.hpp"
#include "rmflab/parallel.hpp"
#include "rmflab/rng.hpp"
#include "rmflab/sampler.hpp"

namespace rmflab {

namespace {

std::string format_cell(const CsvCell& cell) {
  char buf[40];
  if (std::holds_alternative<std::int64_t>(cell)) {
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), std::get<std::int64_t>(cell));
    return std::string(buf, end);
  }
  const double v = std::get<double>(cell);
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, end);
}

void check_budget(double estimated_ops, bool force) {
  if (!force && estimated_ops > kBudgetLimit) {
    throw budget_error("estimated work " + std::to_string(estimated_ops) +
                       " exceeds budget 1e11; pass --force to run anyway");
  }
}

}  // namespace

std::string CsvTable::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += header[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_cell(row[i]);
    }
    out += '\n';
  }
  return out;
}

CsvTable exp_harper_ratio(std::vector<std::int64_t> x_grid, std::int64_t trials,
                          std::uint64_t seed, int workers, bool force, SeedLedger* ledger) {
  if (x_grid.empty()) throw std::domain_error("exp_harper_ratio: empty x grid");
  std::sort(x_grid.begin(), x_grid.end());
  for (auto x : x_grid) {
    if (x < 1000 || x > 10'000'000) {
      throw std::domain_error("exp_harper_ratio: x grid must lie in [1e3, 1e7]");
    }
  }
  if (trials < 10'000) throw std::domain_error("exp_harper_ratio: need trials >= 1e4");
  double total_x = 0;
  for (auto x : x_grid) total_x += static_cast<double>(x);
  check_budget(static_cast<double>(trials) * total_x, force);

  const std::uint64_t x_max = static_cast<std::uint64_t>(x_grid.back());
  const SpfTable spf = SpfTable::build(x_max);
  const PrimeList primes = PrimeList::build(x_max);

  CsvTable table;
  table.header = {"x", "E1_hat", "stderr", "ratio"};
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    const std::int64_t x = x_grid[i];
    const std::uint64_t row_seed = derive_seed(seed, i);
    if (ledger) ledger->note("x=" + std::to_string(x), row_seed);
    const auto est = estimate_abs_moment(CoefficientSpec::all_ones(x), 1.0, trials, row_seed,
                                         workers, spf, primes);
    const double lx = std::log(static_cast<double>(x));
    const double ratio = est.value * std::pow(std::log(lx), 0.25) / std::sqrt(static_cast<double>(x));
    table.rows.push_back({x, est.value, est.stderr_, ratio});
  }
  return table;
}

CsvTable exp_threshold(std::int64_t x, std::vector<double> r_grid, std::int64_t trials,
                       std::uint64_t seed, int workers, bool force, SeedLedger* ledger,
                       const std::string& family) {
  if (x < 4) throw std::domain_error("exp_threshold: x too small");
  if (r_grid.empty()) throw std::domain_error("exp_threshold: empty R grid");
  const bool interval = family == "interval";
  if (!interval && family != "rough") {
    throw std::domain_error("exp_threshold: family must be \"rough\" or \"interval\"");
  }
  std::sort(r_grid.begin(), r_grid.end());
  const double sqrt_x = std::sqrt(static_cast<double>(x));
  std::int64_t n_max = x;
  for (double r : r_grid) {
    if (interval) {
      if (r < 1.0 || r > static_cast<double>(x)) {
        throw std::domain_error("exp_threshold: interval lengths must lie in [1, x]");
      }
      n_max = std::max(n_max, x + static_cast<std::int64_t>(r));
    } else if (r < 2.0 || r > sqrt_x) {
      throw std::domain_error("exp_threshold: R grid must lie in [2, sqrt(x)]");
    }
  }
  check_budget(static_cast<double>(trials) * static_cast<double>(r_grid.size()) *
                   static_cast<double>(n_max),
               force);

  const SpfTable spf = SpfTable::build(static_cast<std::uint64_t>(n_max));
  const PrimeList primes = PrimeList::build(static_cast<std::uint64_t>(n_max));

  CsvTable table;
  table.header = {"R", "|A_R|", "E1_hat", "stderr", "ratio"};
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    const double r = r_grid[i];
    const std::uint64_t row_seed = derive_seed(seed, i);
    if (ledger) ledger->note((interval ? "y=" : "R=") + std::to_string(r), row_seed);
    const auto coeffs = interval
                            ? CoefficientSpec::interval(x, static_cast<std::int64_t>(r))
                            : CoefficientSpec::rough(x, r, spf);
    const std::int64_t card =
        interval ? static_cast<std::int64_t>(r)
                 : static_cast<std::int64_t>(count_rough({static_cast<std::uint64_t>(x), r}, spf));
    const auto est = estimate_abs_moment(coeffs, 1.0, trials, row_seed, workers, spf, primes);
    table.rows.push_back(
        {r, card, est.value, est.stderr_, est.value / std::sqrt(static_cast<double>(card))});
  }
  return table;
}

CsvTable exp_reduction(std::int64_t x, double r, std::int64_t trials, std::uint64_t seed,
                       int workers, bool force, SeedLedger* ledger) {
  if (x < 100 || x > 1'000'000) throw std::domain_error("exp_reduction: need 100 <= x <= 1e6");
  check_budget(2.0 * static_cast<double>(trials) * static_cast<double>(x), force);

  const SpfTable spf = SpfTable::build(static_cast<std::uint64_t>(x));
  const PrimeList primes = PrimeList::build(static_cast<std::uint64_t>(x));
  const std::uint64_t lhs_seed = derive_seed(seed, 0);
  const std::uint64_t rhs_seed = derive_seed(seed, 1);
  if (ledger) {
    ledger->note("lhs", lhs_seed);
    ledger->note("rhs", rhs_seed);
  }

  const auto coeffs = CoefficientSpec::rough(x, r, spf);
  const auto lhs_est = estimate_abs_moment(coeffs, 1.0, trials, lhs_seed, workers, spf, primes);

  const EulerParams params{r, static_cast<double>(x), 0.0, 0};
  const double cap = params.cap();
  const std::uint64_t limit = std::max<std::uint64_t>(2, static_cast<std::uint64_t>(std::ceil(cap)) + 1);
  std::vector<double> roots(static_cast<std::size_t>(trials));
  thread_local RmfSample sample;
  parallel_for(trials, workers, [&](std::int64_t i) {
    RmfSample::generate_into(sample, limit, Model::kSteinhaus,
                             derive_seed(rhs_seed, static_cast<std::uint64_t>(i)), primes);
    roots[static_cast<std::size_t>(i)] = std::sqrt(integral_sq(sample, params));
  });
  KahanSum acc;
  for (double v : roots) acc.add(v);
  const double mean_root = acc.value() / static_cast<double>(trials);
  const double rhs =
      std::sqrt(static_cast<double>(x) / std::log(static_cast<double>(x))) * mean_root;

  CsvTable table;
  table.header = {"lhs", "rhs", "ratio"};
  table.rows.push_back({lhs_est.value, rhs, lhs_est.value / rhs});
  return table;
}

CsvTable exp_correlation(double x, double r, double v, std::int64_t samples, std::uint64_t seed,
                         int workers, bool force, SeedLedger* ledger) {
  if (x < 100 || x > 1e8) throw std::domain_error("exp_correlation: need 100 <= x <= 1e8");
  if (r < 2.0 || v <= 0.0) throw std::domain_error("exp_correlation: need R >= 2, V > 0");
  if (samples < 10) throw std::domain_error("exp_correlation: need samples >= 10");
  const double lx = std::log(x);
  const int m = min_grid_points(x);
  check_budget(static_cast<double>(samples) * m * (x / lx), force);

  const std::uint64_t limit = static_cast<std::uint64_t>(std::ceil(x));
  const PrimeList primes = PrimeList::build(limit);
  if (ledger) ledger->note("samples", seed);

  const auto spec = BarrierSpecL::make(x, r, v);
  const double sigma = 4.0 * v / lx;
  const double h = 1.0 / static_cast<double>(m - 1);

  std::vector<double> restricted(static_cast<std::size_t>(samples));
  thread_local RmfSample sample;
  parallel_for(samples, workers, [&](std::int64_t i) {
    RmfSample::generate_into(sample, limit, Model::kSteinhaus,
                             derive_seed(seed, static_cast<std::uint64_t>(i)), primes);
    const auto log_abs2 = log_abs_sq_grid(sample, std::nextafter(r, 0.0), x, sigma, -0.5, h, m);
    KahanSum acc;
    for (int j = 0; j < m; ++j) {
      const double t = -0.5 + h * static_cast<double>(j);
      if (!event_l(sample, spec, t)) continue;
      const double w = (j == 0 || j == m - 1) ? 0.5 : 1.0;
      acc.add(w * std::exp(log_abs2[static_cast<std::size_t>(j)]));
    }
    const double integral = h * acc.value();
    restricted[static_cast<std::size_t>(i)] = integral * integral;
  });
  KahanSum acc;
  for (double w : restricted) acc.add(w);
  const double lhs = acc.value() / static_cast<double>(samples);
  const double bound = (lx / (v * std::log(r))) * (lx / (v * std::log(r)));

  CsvTable table;
  table.header = {"lhs", "bound", "ratio"};
  table.rows.push_back({lhs, bound, lhs / bound});
  return table;
}

namespace {

// Integrand of the geometric-progression mean modulus: |sin(pi K u)| / sin(pi u)
// on (0, 1), extended by continuity at the endpoints.
double dirichlet_kernel(double u, std::int64_t k) {
  const double den = std::sin(3.141592653589793 * u);
  if (den < 1e-300) return static_cast<double>(k);
  return std::abs(std::sin(3.141592653589793 * static_cast<double>(k) * u)) / den;
}

double gl16_kernel(double lo, double hi, std::int64_t k) {
  // Nodes/weights mirror the 16-point rule used elsewhere.
  static constexpr double node[8] = {
      0.0950125098376374401853193, 0.2816035507792589132304605,
      0.4580167776572273863424194, 0.6178762444026437484466718,
      0.7554044083550030338951012, 0.8656312023878317438804679,
      0.9445750230732325760779884, 0.9894009349916499325961542,
  };
  static constexpr double weight[8] = {
      0.1894506104550684962853967, 0.1826034150449235888667637,
      0.1691565193950025381893121, 0.1495959888165767320815017,
      0.1246289712555338720524763, 0.0951585116824927848099251,
      0.0622535239386478928628438, 0.0271524594117540948517806,
  };
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  double acc = 0.0;
  for (int i = 0; i < 8; ++i) {
    acc += weight[i] *
           (dirichlet_kernel(mid + half * node[i], k) + dirichlet_kernel(mid - half * node[i], k));
  }
  return half * acc;
}

double adaptive_kernel(double lo, double hi, std::int64_t k, double tol, int depth) {
  const double whole = gl16_kernel(lo, hi, k);
  const double mid = 0.5 * (lo + hi);
  const double halves = gl16_kernel(lo, mid, k) + gl16_kernel(mid, hi, k);
  if (depth <= 0 || std::abs(whole - halves) <= tol) return halves;
  return adaptive_kernel(lo, mid, k, 0.5 * tol, depth - 1) +
         adaptive_kernel(mid, hi, k, 0.5 * tol, depth - 1);
}

}  // namespace

double geometric_mean_modulus(std::int64_t k) {
  if (k < 1 || k > 10'000) throw std::domain_error("geometric_mean_modulus: need 1 <= K <= 1e4");
  // The kernel is smooth between consecutive zeros j/K of sin(pi K u).
  KahanSum acc;
  const double tol = 1e-9 / static_cast<double>(k);
  for (std::int64_t j = 0; j < k; ++j) {
    const double lo = static_cast<double>(j) / static_cast<double>(k);
    const double hi = static_cast<double>(j + 1) / static_cast<double>(k);
    acc.add(adaptive_kernel(lo, hi, k, tol, 24));
  }
  return acc.value();
}

CsvTable exp_geometric(std::int64_t p, std::vector<std::int64_t> k_grid, SeedLedger* ledger) {
  if (p < 2) throw std::domain_error("exp_geometric: need p >= 2");
  if (k_grid.empty()) throw std::domain_error("exp_geometric: empty K grid");
  std::sort(k_grid.begin(), k_grid.end());
  (void)ledger;  // deterministic, no seeds
  CsvTable table;
  table.header = {"K", "E1", "ratio"};
  for (std::int64_t k : k_grid) {
    const double e1 = geometric_mean_modulus(k);
    table.rows.push_back({k, e1, e1 / std::log(static_cast<double>(k))});
  }
  return table;
}

CsvTable exp_clt_energy(std::vector<std::int64_t> n_grid, double theta, SeedLedger* ledger) {
  if (n_grid.empty()) throw std::domain_error("exp_clt_energy: empty N grid");
  std::sort(n_grid.begin(), n_grid.end());
  for (auto n : n_grid) {
    if (n < 1 || n > 2000) throw std::domain_error("exp_clt_energy: N grid must lie in [1, 2000]");
  }
  (void)ledger;  // exact enumeration, no seeds
  CsvTable table;
  table.header = {"N", "allones_energy_ratio", "achar_energy_ratio", "allones_kurtosis",
                  "achar_kurtosis"};
  for (std::int64_t n : n_grid) {
    const double n2 = static_cast<double>(n) * static_cast<double>(n);
    const auto ones = CoefficientSpec::all_ones(n);
    const auto achar = CoefficientSpec::additive_char(n, theta);
    const double e_ones = energy_fast(ones);
    const double e_achar = energy_fast(achar);
    const double m2_ones = exact_second_moment(ones);
    const double m2_achar = exact_second_moment(achar);
    table.rows.push_back({n, e_ones / n2, e_achar / n2, e_ones / (m2_ones * m2_ones),
                          e_achar / (m2_achar * m2_achar)});
  }
  return table;
}

}  // namespace rmflab
