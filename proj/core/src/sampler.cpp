#include "rmflab/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rmflab/kahan.hpp"
#include "rmflab/rng.hpp"

namespace rmflab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925287;

std::complex<double> steinhaus_phase(std::uint64_t seed, std::uint64_t index) {
  const double u = unit_interval(derive_seed(seed, index));
  return {std::cos(kTwoPi * u), std::sin(kTwoPi * u)};
}

std::complex<double> rademacher_phase(std::uint64_t seed, std::uint64_t index) {
  return {(derive_seed(seed, index) >> 63) ? -1.0 : 1.0, 0.0};
}

}  // namespace

void RmfSample::generate_into(RmfSample& out, std::uint64_t limit, Model model,
                              std::uint64_t seed, const PrimeList& primes) {
  if (limit < 2) throw std::domain_error("RmfSample: limit must be >= 2");
  if (limit > primes.limit()) throw std::domain_error("RmfSample: limit exceeds prime list");
  const auto [first, last] = primes.range_closed(2.0, static_cast<double>(limit));
  (void)first;
  out.limit_ = limit;
  out.model_ = model;
  out.seed_ = seed;
  out.primes_ = &primes;
  out.phases_.resize(last);
  if (model == Model::kSteinhaus) {
    for (std::size_t i = 0; i < last; ++i) out.phases_[i] = steinhaus_phase(seed, i);
  } else {
    for (std::size_t i = 0; i < last; ++i) out.phases_[i] = rademacher_phase(seed, i);
  }
}

RmfSample RmfSample::generate(std::uint64_t limit, Model model, std::uint64_t seed,
                              const PrimeList& primes) {
  RmfSample out;
  generate_into(out, limit, model, seed, primes);
  return out;
}

RmfSample RmfSample::from_phases(std::uint64_t limit, std::vector<std::complex<double>> phases,
                                 const PrimeList& primes) {
  if (limit < 2 || limit > primes.limit()) throw std::domain_error("RmfSample: bad limit");
  const auto [first, last] = primes.range_closed(2.0, static_cast<double>(limit));
  (void)first;
  if (phases.size() != last) throw std::domain_error("RmfSample: need one phase per prime");
  for (const auto& z : phases) {
    if (std::abs(std::abs(z) - 1.0) > 1e-12) {
      throw std::domain_error("RmfSample: phases must have unit modulus");
    }
  }
  RmfSample out;
  out.limit_ = limit;
  out.model_ = Model::kSteinhaus;
  out.seed_ = 0;
  out.primes_ = &primes;
  out.phases_ = std::move(phases);
  return out;
}

const std::uint32_t* RmfSample::prime_values() const { return primes_->values().data(); }

std::complex<double> f_at(const RmfSample& sample, std::uint64_t n, const SpfTable& spf) {
  if (n < 1 || n > sample.limit()) throw std::domain_error("f_at: n out of range");
  if (n > spf.limit()) throw std::domain_error("f_at: n exceeds table limit");
  std::complex<double> value{1.0, 0.0};
  const auto& primes = sample.primes().values();
  while (n > 1) {
    const std::uint64_t p = spf.spf(n);
    const auto it = std::lower_bound(primes.begin(), primes.end(), static_cast<std::uint32_t>(p));
    const std::complex<double> fp = sample.phase(static_cast<std::size_t>(it - primes.begin()));
    while (n % p == 0) {
      n /= p;
      value *= fp;
    }
  }
  return value;
}

namespace {

template <bool kIndicator>
std::complex<double> partial_sum_impl(const RmfSample& sample, const CoefficientSpec& coeffs,
                                      const SpfTable& spf, std::vector<std::complex<double>>& f) {
  const std::int64_t n_max = coeffs.size();
  KahanComplexSum acc;
  if (n_max >= 1 && (!kIndicator ? coeffs.values()[0] != 0.0 : coeffs.mask()[0] != 0)) {
    acc.add(kIndicator ? std::complex<double>{1.0, 0.0} : coeffs.values()[0]);
  }
  if (n_max < 2) return acc.value();
  f.resize(static_cast<std::size_t>(n_max) + 1);
  f[1] = {1.0, 0.0};
  std::size_t prime_index = 0;
  for (std::int64_t n = 2; n <= n_max; ++n) {
    const std::uint32_t p = spf.spf(static_cast<std::uint64_t>(n));
    std::complex<double> fn;
    if (p == static_cast<std::uint32_t>(n)) {
      fn = sample.phase(prime_index++);
    } else {
      fn = f[static_cast<std::size_t>(n) / p] * f[p];
    }
    f[static_cast<std::size_t>(n)] = fn;
    if constexpr (kIndicator) {
      if (coeffs.mask()[static_cast<std::size_t>(n - 1)]) acc.add(fn);
    } else {
      const auto a = coeffs.values()[static_cast<std::size_t>(n - 1)];
      if (a != 0.0) acc.add(a * fn);
    }
  }
  return acc.value();
}

}  // namespace

std::complex<double> partial_sum(const RmfSample& sample, const CoefficientSpec& coeffs,
                                 const SpfTable& spf, std::vector<std::complex<double>>& work) {
  const std::int64_t n_max = coeffs.size();
  if (n_max > static_cast<std::int64_t>(sample.limit())) {
    throw std::domain_error("partial_sum: N exceeds sample limit");
  }
  if (n_max > static_cast<std::int64_t>(spf.limit())) {
    throw std::domain_error("partial_sum: N exceeds table limit");
  }
  if (coeffs.is_indicator()) return partial_sum_impl<true>(sample, coeffs, spf, work);
  return partial_sum_impl<false>(sample, coeffs, spf, work);
}

std::complex<double> partial_sum(const RmfSample& sample, const CoefficientSpec& coeffs,
                                 const SpfTable& spf) {
  std::vector<std::complex<double>> work;
  return partial_sum(sample, coeffs, spf, work);
}

}  // namespace rmflab
