#include "rmflab/barriers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rmflab/euler.hpp"
#include "rmflab/kahan.hpp"
#include "rmflab/parallel.hpp"
#include "rmflab/rng.hpp"

namespace rmflab {

WalkConfig::WalkConfig(int n_, std::vector<double> variances_, double a_,
                       std::function<double(int)> drift_)
    : n(n_), variances(std::move(variances_)), a(a_), drift(std::move(drift_)) {
  if (n < 1) throw std::domain_error("WalkConfig: n must be >= 1");
  if (static_cast<int>(variances.size()) != n) {
    throw std::domain_error("WalkConfig: need one variance per step");
  }
  for (double v : variances) {
    if (v < 0.05 || v > 20.0) throw std::domain_error("WalkConfig: variances must lie in [1/20, 20]");
  }
  if (a < 1.0) throw std::domain_error("WalkConfig: a must be >= 1");
  if (drift) {
    for (int j = 1; j <= n; ++j) {
      if (std::abs(drift(j)) > 10.0 * std::log(static_cast<double>(j))) {
        throw std::domain_error("WalkConfig: |h(j)| must be <= 10 ln j");
      }
    }
  }
}

ProbEstimate ballot_mc(const WalkConfig& config, std::int64_t walks, std::uint64_t seed,
                       int workers) {
  if (walks < 1000) throw std::domain_error("ballot_mc: need walks >= 1000");
  std::vector<double> scale(static_cast<std::size_t>(config.n));
  for (int j = 0; j < config.n; ++j) scale[static_cast<std::size_t>(j)] = std::sqrt(config.variances[static_cast<std::size_t>(j)]);
  std::vector<double> barrier(static_cast<std::size_t>(config.n));
  for (int j = 1; j <= config.n; ++j) barrier[static_cast<std::size_t>(j - 1)] = config.barrier_at(j);

  std::vector<std::uint8_t> stayed(static_cast<std::size_t>(walks));
  parallel_for(walks, workers, [&](std::int64_t w) {
    const std::uint64_t walk_seed = derive_seed(seed, static_cast<std::uint64_t>(w));
    double sum = 0.0;
    std::uint8_t ok = 1;
    for (int j = 0; j < config.n; ++j) {
      sum += scale[static_cast<std::size_t>(j)] *
             counter_gaussian(walk_seed, static_cast<std::uint64_t>(j));
      if (sum > barrier[static_cast<std::size_t>(j)]) {
        ok = 0;
        break;
      }
    }
    stayed[static_cast<std::size_t>(w)] = ok;
  });

  std::int64_t hits = 0;
  for (auto s : stayed) hits += s;
  const double p = static_cast<double>(hits) / static_cast<double>(walks);
  const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(walks));
  return {p, se, walks};
}

double t_mesh(double x, int j) {
  if (j < 0) throw std::domain_error("t_mesh: j must be >= 0");
  const double level = std::log(x) / std::exp(static_cast<double>(j + 1));
  if (level <= 1.0) throw std::domain_error("t_mesh: x too small for level j");
  const double mesh = level * std::log(level);
  if (mesh <= 1.0) throw std::domain_error("t_mesh: x too small for level j");
  return mesh;
}

double discretize_t(double t, int j, double x) {
  if (j < 0) throw std::domain_error("discretize_t: j must be >= 0");
  double u = t;
  for (int level = 0; level <= j; ++level) {
    const double mesh = t_mesh(x, level);
    u = std::floor(u * mesh) / mesh;
  }
  return u;
}

std::vector<double> t_grid(double x, int j) {
  const double mesh = t_mesh(x, j);
  const std::int64_t n_max = static_cast<std::int64_t>(std::floor(mesh));
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(2 * n_max + 1));
  for (std::int64_t n = -n_max; n <= n_max; ++n) {
    grid.push_back(static_cast<double>(n) / mesh);
  }
  return grid;
}

namespace {

double log_log(double v) { return std::log(std::log(v)); }

}  // namespace

BarrierSpecG BarrierSpecG::make(double x, double r, int k, int b) {
  if (x <= std::exp(std::exp(1.0))) throw std::domain_error("BarrierSpecG: x too small");
  if (r < 2.0) throw std::domain_error("BarrierSpecG: R must be >= 2");
  const int k_max = static_cast<int>(std::floor(std::log(log_log(x))));
  if (k < 0 || k > k_max) throw std::domain_error("BarrierSpecG: need 0 <= k <= ln ln ln x");
  BarrierSpecG spec;
  spec.x = x;
  spec.r = r;
  spec.k = k;
  spec.b = b;
  spec.cx = log_log(r) + 100.0 * std::log(log_log(x));
  return spec;
}

BarrierSpecL BarrierSpecL::make(double x, double r, double v, int b) {
  if (x <= std::exp(std::exp(1.0))) throw std::domain_error("BarrierSpecL: x too small");
  if (r < 2.0) throw std::domain_error("BarrierSpecL: R must be >= 2");
  if (v <= 0.0) throw std::domain_error("BarrierSpecL: V must be positive");
  const double gap = log_log(x) - log_log(r);
  if (gap <= 0.0) throw std::domain_error("BarrierSpecL: need R < x^{1/e}");
  BarrierSpecL spec;
  spec.x = x;
  spec.r = r;
  spec.v = v;
  spec.b = b;
  spec.c = 0.25 * std::min(log_log(r) / std::sqrt(gap), 1.0);
  spec.dx = spec.c * std::sqrt(gap);
  return spec;
}

namespace {

// Shared walk over the barrier conjunction: for each j in [j_lo, j_hi] the
// suffix product of increments ell = j .. ell_hi must stay inside
// [lower(j), upper(j)] on the log scale.
template <class TOfEll, class Bounds>
bool barrier_event(const RmfSample& sample, double x, double sigma, int j_lo, double j_hi_real,
                   int ell_hi, TOfEll&& t_of_ell, Bounds&& bounds) {
  const int j_hi = static_cast<int>(std::floor(j_hi_real + 1e-12));
  if (j_hi < j_lo) return true;  // vacuous conjunction
  // Suffix log-moduli of the increment products, shared across j.
  std::vector<double> suffix(static_cast<std::size_t>(std::max(0, ell_hi - j_lo + 1)) + 1, 0.0);
  for (int ell = ell_hi; ell >= j_lo; --ell) {
    const double re =
        log_increment(sample, ell, sigma, t_of_ell(ell), x).real();
    suffix[static_cast<std::size_t>(ell - j_lo)] =
        suffix[static_cast<std::size_t>(ell - j_lo + 1)] + re;
  }
  for (int j = j_lo; j <= j_hi; ++j) {
    const double log_abs =
        (j <= ell_hi) ? suffix[static_cast<std::size_t>(j - j_lo)] : 0.0;
    const auto [lo, hi] = bounds(j);
    if (log_abs < lo || log_abs > hi) return false;
  }
  return true;
}

}  // namespace

bool event_g(const RmfSample& sample, const BarrierSpecG& spec, double t) {
  const double lx = std::log(spec.x);
  const double span = log_log(spec.x) - log_log(spec.r);
  const double j_hi_real = span - spec.b - 2;
  const int ell_hi = static_cast<int>(std::floor(span)) - spec.b - 2;
  const double sigma = -static_cast<double>(spec.k) / lx;
  return barrier_event(
      sample, spec.x, sigma, spec.k, j_hi_real, ell_hi,
      [&](int ell) { return discretize_t(t, ell, spec.x); },
      [&](int j) {
        const double log_m = std::log(lx / (std::exp(static_cast<double>(j + 1)) * std::log(spec.r)));
        return std::pair<double, double>{-(log_m + spec.cx), log_m + spec.cx};
      });
}

bool event_l(const RmfSample& sample, const BarrierSpecL& spec, double t) {
  const double lx = std::log(spec.x);
  const double span = log_log(spec.x) - log_log(spec.r);
  const double j_hi_real = span - spec.b - 2;
  const int ell_hi = static_cast<int>(std::floor(span)) - spec.b - 2;
  const int j_lo = static_cast<int>(std::floor(std::log(spec.v))) + 3;
  const double sigma = 4.0 * spec.v / lx;
  return barrier_event(
      sample, spec.x, sigma, j_lo, j_hi_real, ell_hi,
      [&](int) { return t; },
      [&](int j) {
        const double log_m = std::log(lx / (std::exp(static_cast<double>(j + 1)) * std::log(spec.r)));
        const double up = log_m + spec.dx;
        return std::pair<double, double>{-static_cast<double>(spec.b) * up, up};
      });
}

TiltedEstimate tilted_expectation(const std::function<double(const RmfSample&)>& payoff,
                                  double sigma, double x, std::int64_t samples,
                                  std::uint64_t seed, const PrimeList& primes, int workers) {
  if (samples < 500) throw std::domain_error("tilted_expectation: need samples >= 500");
  if (std::abs(sigma) > 0.01) throw std::domain_error("tilted_expectation: need |sigma| <= 1/100");
  const double cap = std::exp(std::log(x) / std::exp(1.0));  // x^{1/e}
  const std::uint64_t limit = std::max<std::uint64_t>(2, static_cast<std::uint64_t>(std::ceil(cap)) + 1);
  if (limit > primes.limit()) throw std::domain_error("tilted_expectation: x^{1/e} exceeds prime list");

  std::vector<double> log_w(static_cast<std::size_t>(samples));
  std::vector<double> values(static_cast<std::size_t>(samples));
  thread_local RmfSample sample;
  parallel_for(samples, workers, [&](std::int64_t i) {
    RmfSample::generate_into(sample, limit, Model::kSteinhaus,
                             derive_seed(seed, static_cast<std::uint64_t>(i)), primes);
    // log of prod |1 - f(p) p^{-1/2-sigma}|^{-2} over p <= x^{1/e}
    log_w[static_cast<std::size_t>(i)] =
        2.0 * log_euler_range(sample, 1.0, cap, sigma, 0.0).real();
    values[static_cast<std::size_t>(i)] = payoff(sample);
  });

  const double max_log = *std::max_element(log_w.begin(), log_w.end());
  KahanSum num, den, sq;
  for (std::size_t i = 0; i < log_w.size(); ++i) {
    const double w = std::exp(log_w[i] - max_log);
    num.add(w * values[i]);
    den.add(w);
    sq.add(w * w);
  }
  TiltedEstimate out;
  out.value = num.value() / den.value();
  out.ess = den.value();  // sum of weights over the max weight
  out.low_ess = out.ess < 10.0;
  return out;
}

ProbEstimate g_fail_prob_mc(const BarrierSpecG& spec, std::int64_t n_samples, std::uint64_t seed,
                            const PrimeList& primes, int workers) {
  if (n_samples < 100) throw std::domain_error("g_fail_prob_mc: need n_samples >= 100");
  // The increments consult primes up to x^{exp(-(k+1))}; phases are addressed
  // per prime, so a sample over that range evaluates the events exactly as a
  // full-limit sample with the same seed would.
  const double cap = std::exp(std::log(spec.x) * std::exp(-static_cast<double>(spec.k + 1)));
  const std::uint64_t limit = std::max<std::uint64_t>(2, static_cast<std::uint64_t>(std::ceil(cap)) + 1);
  if (limit > primes.limit()) throw std::domain_error("g_fail_prob_mc: prime list too small");
  const std::vector<double> grid = t_grid(spec.x, spec.k);

  std::vector<std::uint8_t> failed(static_cast<std::size_t>(n_samples));
  thread_local RmfSample sample;
  parallel_for(n_samples, workers, [&](std::int64_t i) {
    RmfSample::generate_into(sample, limit, Model::kSteinhaus,
                             derive_seed(seed, static_cast<std::uint64_t>(i)), primes);
    std::uint8_t fail = 0;
    for (double t : grid) {
      if (!event_g(sample, spec, t)) {
        fail = 1;
        break;
      }
    }
    failed[static_cast<std::size_t>(i)] = fail;
  });

  std::int64_t fails = 0;
  for (auto f : failed) fails += f;
  const double p = static_cast<double>(fails) / static_cast<double>(n_samples);
  const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(n_samples));
  return {p, se, n_samples};
}

}  // namespace rmflab
