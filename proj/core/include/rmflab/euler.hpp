#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "rmflab/ntcore.hpp"
#include "rmflab/sampler.hpp"

namespace rmflab {

// Parameters of the random Euler product over primes r <= p <= cap at
// s = 1/2 + sigma + it. With k present the cap is x^{exp(-(k+1))} (the k-th
// partial product); absent, the product runs up to x.
struct EulerParams {
  double r;
  double x;
  double sigma = 0.0;
  std::optional<int> k;

  double cap() const;
};

// Sum over primes a < p <= b of -log(1 - f(p) p^{-1/2 - sigma - it}),
// principal branch per factor. Empty ranges give 0.
std::complex<double> log_euler_range(const RmfSample& sample, double a, double b, double sigma,
                                     double t);

// log of the ell-th increment: primes in (x^{exp(-(ell+2))}, x^{exp(-(ell+1))}].
// x = 0 means the sample's own limit.
std::complex<double> log_increment(const RmfSample& sample, int ell, double sigma, double t,
                                   double x = 0.0);

// log of the (partial) Euler product described by params.
std::complex<double> log_product(const RmfSample& sample, const EulerParams& params, double t);

// Grid resolution floor for integrals of |F|^2 over |t| <= 1/2: the product
// oscillates on the t-scale 1/ln x.
int min_grid_points(double x);

// 2 Re log F at the m uniform nodes t0, t0+dt, ...: the fast evaluation path
// (per-prime rotation recurrence, logs taken in batches).
std::vector<double> log_abs_sq_grid(const RmfSample& sample, double a, double b, double sigma,
                                    double t0, double dt, int m);

struct ProductGrid {
  std::vector<double> t;                      // uniform, symmetric about 0
  std::vector<std::complex<double>> log_f;    // complex log F at each node
};

ProductGrid build_product_grid(const RmfSample& sample, const EulerParams& params, int m = 0);

// Trapezoid quadrature of |F(1/2 + sigma + it)|^2 over |t| <= 1/2. m = 0 uses
// the resolution floor; anything below the floor is rejected.
double integral_sq(const RmfSample& sample, const EulerParams& params, int m = 0);

struct PrimeMoment {
  double exact;   // exact product of per-prime expectations
  double approx;  // exp of the leading sum, for comparison against the exact value
};

// E prod over a < p <= b of |1 - f(p) p^{-1/2-sigma}|^{-2}: exactly
// prod (1 - p^{-1-2 sigma})^{-1}, with exp(sum p^{-1-2 sigma}) alongside.
PrimeMoment mean_sq_closed_form(double a, double b, double sigma, const PrimeList& primes);

// E prod of |1 - f(p) p^{-1/2-sigma}|^{-2} |1 - f(p) p^{-1/2-sigma-it}|^{-2}:
// per-prime series sum_s r^{2s} |sum_{l<=s} p^{-itl}|^2 with r = p^{-1/2-sigma},
// with exp(sum (2 + 2cos(t ln p)) p^{-1-2 sigma}) alongside.
PrimeMoment two_point_closed_form(double a, double b, double sigma, double t,
                                  const PrimeList& primes);

struct ParsevalSides {
  double lhs;  // integral of |sum_{n<=x} a_n|^2 x^{-1-2 sigma} dx, exact step sum
  double rhs;  // (1/2pi) integral of |A(sigma+it)/(sigma+it)|^2 dt, numeric
};

// Both sides of the Dirichlet-series mean value identity, computed
// independently. coeffs[i] is a_{i+1}; sigma > 0 required.
ParsevalSides parseval_both_sides(std::span<const std::complex<double>> coeffs, double sigma);

// int_{-T}^{T} cos(omega t) / (sigma^2 + t^2) dt. Building block of the
// Parseval right-hand side; exposed so tests can check it against the
// full-line closed form (pi/sigma) e^{-sigma |omega|}.
double cos_lorentz_integral(double omega, double sigma, double cutoff);

}  // namespace rmflab
