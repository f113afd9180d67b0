#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "rmflab/ntcore.hpp"
#include "rmflab/sampler.hpp"

namespace rmflab {

// Gaussian walk staying below a slowly varying barrier: n steps with the given
// per-step variances, barrier a + h(j). Constraints checked at construction:
// variances in [1/20, 20], a >= 1, |h(j)| <= 10 ln j.
struct WalkConfig {
  WalkConfig(int n, std::vector<double> variances, double a,
             std::function<double(int)> drift = nullptr);

  int n;
  std::vector<double> variances;
  double a;
  std::function<double(int)> drift;  // null means h = 0

  double barrier_at(int j) const { return a + (drift ? drift(j) : 0.0); }
};

struct ProbEstimate {
  double value = 0.0;
  double stderr_ = 0.0;  // binomial
  std::int64_t n = 0;
};

// Fraction of walks with sum_{m<=j} G_m <= a + h(j) for all j <= n. Increments
// are addressed by (walk, step), so walks with the same seed share prefixes
// across different n.
ProbEstimate ballot_mc(const WalkConfig& config, std::int64_t walks, std::uint64_t seed,
                       int workers = 1);

// Mesh ((ln x)/e^{j+1}) ln((ln x)/e^{j+1}) of discretization level j; throws
// once the mesh drops to 1 or below (x too small for that level).
double t_mesh(double x, int j);

// t(j): iterated flooring of t onto the level meshes, t(-1) = t.
double discretize_t(double t, int j, double x);

// All grid points n/mesh with |n| <= mesh at level j.
std::vector<double> t_grid(double x, int j);

// Barrier event with two-sided bounds e^{+-C(x)} around ln x / (e^{j+1} ln R),
// checked along t(ell)-discretized increments at s = 1/2 - k/ln x + it.
struct BarrierSpecG {
  double x;
  double r;
  int k;
  int b;
  double cx;  // barrier constant, default ln ln R + 100 ln ln ln x

  static BarrierSpecG make(double x, double r, int k, int b = 2);
};

// Barrier event at s = 1/2 + 4V/ln x + it: upper bound (ln x/(e^{j+1} ln R)) e^{D(x)},
// lower bound its -B-th power, over floor(ln V)+3 <= j.
struct BarrierSpecL {
  double x;
  double r;
  double v;
  int b;
  double c;   // (1/4) min(ln ln R / sqrt(ln ln x - ln ln R), 1)
  double dx;  // c sqrt(ln ln x - ln ln R)

  static BarrierSpecL make(double x, double r, double v, int b = 2);
};

// Events are vacuously true when the j-range is empty. The sample must cover
// the prime range the increments consult (p <= x^{exp(-(k+1))} for G,
// p <= x^{1/e} for L).
bool event_g(const RmfSample& sample, const BarrierSpecG& spec, double t);
bool event_l(const RmfSample& sample, const BarrierSpecL& spec, double t);

struct TiltedEstimate {
  double value = 0.0;
  double ess = 0.0;    // sum of weights normalized by the largest weight
  bool low_ess = false;
};

// Self-normalized importance sampling under the tilted measure with density
// proportional to prod_{p <= x^{1/e}} |1 - f(p) p^{-1/2-sigma}|^{-2}. Weights
// are handled in the log domain against their maximum. |sigma| <= 1/100,
// samples >= 500; ess < 10 raises the warning flag.
TiltedEstimate tilted_expectation(const std::function<double(const RmfSample&)>& payoff,
                                  double sigma, double x, std::int64_t samples,
                                  std::uint64_t seed, const PrimeList& primes, int workers = 1);

// Fraction of samples for which event G fails at some grid point of the
// coarsest level T(x, k).
ProbEstimate g_fail_prob_mc(const BarrierSpecG& spec, std::int64_t n_samples, std::uint64_t seed,
                            const PrimeList& primes, int workers = 1);

}  // namespace rmflab
