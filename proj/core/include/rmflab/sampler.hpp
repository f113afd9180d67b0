#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "rmflab/coefficients.hpp"
#include "rmflab/ntcore.hpp"

namespace rmflab {

enum class Model { kSteinhaus, kRademacher };

// One realization of a random multiplicative function: a unit phase per prime
// p <= limit. The phase at the i-th prime is derived from (seed, i) alone, so
// samples sharing a seed agree on shared primes regardless of limit, and the
// realization is independent of thread count by construction. Immutable after
// generation; the backing PrimeList must outlive the sample.
class RmfSample {
 public:
  static RmfSample generate(std::uint64_t limit, Model model, std::uint64_t seed,
                            const PrimeList& primes);
  // Same as generate, reusing out's buffers across trials.
  static void generate_into(RmfSample& out, std::uint64_t limit, Model model, std::uint64_t seed,
                            const PrimeList& primes);
  // Explicit phases, one per prime <= limit. Unit modulus is enforced.
  static RmfSample from_phases(std::uint64_t limit, std::vector<std::complex<double>> phases,
                               const PrimeList& primes);

  std::uint64_t limit() const { return limit_; }
  Model model() const { return model_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t prime_count() const { return phases_.size(); }
  const std::uint32_t* prime_values() const;
  std::complex<double> phase(std::size_t prime_index) const { return phases_[prime_index]; }
  const PrimeList& primes() const { return *primes_; }

 private:
  std::uint64_t limit_ = 0;
  Model model_ = Model::kSteinhaus;
  std::uint64_t seed_ = 0;
  const PrimeList* primes_ = nullptr;
  std::vector<std::complex<double>> phases_;
};

// f(n) via the factorization of n; |f(n)| = 1 up to accumulated rounding.
std::complex<double> f_at(const RmfSample& sample, std::uint64_t n, const SpfTable& spf);

// Sum over n <= N of a(n) f(n), computed in one O(N) pass: f at primes comes
// straight from the sample and composites extend multiplicatively through the
// spf table.
std::complex<double> partial_sum(const RmfSample& sample, const CoefficientSpec& coeffs,
                                 const SpfTable& spf);
// Workspace variant for hot loops; work is resized as needed.
std::complex<double> partial_sum(const RmfSample& sample, const CoefficientSpec& coeffs,
                                 const SpfTable& spf, std::vector<std::complex<double>>& work);

}  // namespace rmflab
