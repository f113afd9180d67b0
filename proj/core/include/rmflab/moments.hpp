#pragma once

#include <cstdint>

#include "rmflab/coefficients.hpp"
#include "rmflab/ntcore.hpp"

namespace rmflab {

struct MomentEstimate {
  double value = 0.0;   // Monte Carlo mean of |S|^{2q}
  double stderr_ = 0.0; // sample std / sqrt(trials)
  std::int64_t trials = 0;
  double two_q = 0.0;
  std::uint64_t seed = 0;
};

// Mean of |sum a(n) f(n)|^{2q} over independent Steinhaus samples. Trial i
// draws its sample from derive_seed(master_seed, i); per-trial values are
// stored by index and reduced in a fixed order, so the result is bitwise
// independent of the worker count.
MomentEstimate estimate_abs_moment(const CoefficientSpec& coeffs, double two_q,
                                   std::int64_t trials, std::uint64_t master_seed, int workers,
                                   const SpfTable& spf, const PrimeList& primes);

// sum |a(n)|^2: the exact second moment of the partial sum.
double exact_second_moment(const CoefficientSpec& coeffs);

// Multiplicative energy E_x(a) = sum over m1 m2 = n1 n2 of
// a(m1) a(m2) conj(a(n1) a(n2)). Oracle form: accumulates the product-indexed
// convolution c_P = sum_{mn=P} a(m) a(n) in direct-indexed blocks and returns
// sum |c_P|^2. N <= 5000.
double energy_bruteforce(const CoefficientSpec& coeffs);

// Same quantity through the bijection m1 = de, n1 = df, m2 = gf, n2 = ge with
// gcd(e, f) = 1: reduces to sum over coprime (e, f) of |T(e, f)|^2 with
// T(e, f) = sum_d a(de) conj(a(df)). O(N^2 log N). N <= 1e6.
double energy_fast(const CoefficientSpec& coeffs);

// R_N(a) = E_x(a) - D(a), the off-diagonal energy, where
// D(a) = 2 (sum |a|^2)^2 - sum |a|^4 is the contribution of quadruples with
// {m1, m2} = {n1, n2} as multisets.
double offdiag_energy(const CoefficientSpec& coeffs);

// Checks E|S|^2 <= (E|S|^4)^{1/3} (E|S|)^{2/3} on Monte Carlo estimates, with
// multiplicative slack 5x the combined relative standard error.
bool holder_chain_check(const MomentEstimate& e2, const MomentEstimate& e4,
                        const MomentEstimate& e1);

}  // namespace rmflab
