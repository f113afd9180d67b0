#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace rmflab {

// Ascending primes up to a fixed limit. Immutable after build; shared
// read-only across workers.
class PrimeList {
 public:
  static PrimeList build(std::uint64_t limit);

  std::uint64_t limit() const { return limit_; }
  const std::vector<std::uint32_t>& values() const { return primes_; }
  std::size_t size() const { return primes_.size(); }

  // Index range [first, last) of primes p with a < p <= b.
  std::pair<std::size_t, std::size_t> range_open_closed(double a, double b) const;
  // Index range [first, last) of primes p with a <= p <= b.
  std::pair<std::size_t, std::size_t> range_closed(double a, double b) const;

 private:
  std::uint64_t limit_ = 0;
  std::vector<std::uint32_t> primes_;
};

// Smallest-prime-factor table over [2, limit]. spf(n) = n exactly when n is
// prime, so one table drives O(log n) factorization and the O(N) multiplicative
// extension used by partial sums. Immutable after build.
class SpfTable {
 public:
  static SpfTable build(std::uint64_t limit);

  std::uint64_t limit() const { return limit_; }
  std::uint32_t spf(std::uint64_t n) const { return spf_[n]; }
  bool is_prime(std::uint64_t n) const { return n >= 2 && spf_[n] == n; }
  // (prime, multiplicity) pairs in ascending prime order.
  std::vector<std::pair<std::uint64_t, int>> factorize(std::uint64_t n) const;

 private:
  std::uint64_t limit_ = 0;
  std::vector<std::uint32_t> spf_;
};

// The set {n <= x : p | n implies p >= R}. The threshold is closed (p >= R)
// and n = 1 is a member, the prime-divisor condition being vacuous for it.
struct RoughSpec {
  std::uint64_t x;
  double r;
};

std::uint64_t count_rough(const RoughSpec& spec, const SpfTable& spf);
std::vector<std::uint64_t> rough_members(const RoughSpec& spec, const SpfTable& spf);

// Inclusion-exclusion oracle for |A_R(x)|, independent of SpfTable. Limited to
// x <= 1e7; switches to a plain sieve count once more than 25 primes lie
// below R, keeping the signed expansion bounded.
std::uint64_t legendre_rough_count(const RoughSpec& spec);

// Psi(x, y): integers n <= x whose prime factors are all <= y. y < 2 leaves
// only n = 1.
std::uint64_t count_smooth(std::uint64_t x, double y, const SpfTable& spf);

struct PrimeSums {
  double plain;   // sum over a < p <= b of p^{-(1+2 sigma)}
  double cosine;  // sum over a < p <= b of 2 cos(t ln p) p^{-(1+2 sigma)}
};

PrimeSums prime_sum(double a, double b, double sigma, double t, const PrimeList& primes);

}  // namespace rmflab
