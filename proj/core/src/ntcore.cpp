#include "rmflab/ntcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rmflab/kahan.hpp"

namespace rmflab {

namespace {

constexpr std::uint64_t kSieveCap = std::uint64_t{1} << 31;

std::vector<bool> composite_flags(std::uint64_t limit) {
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t p = 2; p * p <= limit; ++p) {
    if (composite[p]) continue;
    for (std::uint64_t m = p * p; m <= limit; m += p) composite[m] = true;
  }
  return composite;
}

}  // namespace

PrimeList PrimeList::build(std::uint64_t limit) {
  if (limit < 2) throw std::domain_error("PrimeList: limit must be >= 2");
  if (limit > kSieveCap) throw std::domain_error("PrimeList: limit exceeds sieve cap 2^31");
  PrimeList out;
  out.limit_ = limit;
  const auto composite = composite_flags(limit);
  const double density_guess = static_cast<double>(limit) / std::log(static_cast<double>(limit) + 2.0);
  out.primes_.reserve(static_cast<std::size_t>(1.2 * density_guess) + 16);
  for (std::uint64_t n = 2; n <= limit; ++n) {
    if (!composite[n]) out.primes_.push_back(static_cast<std::uint32_t>(n));
  }
  return out;
}

std::pair<std::size_t, std::size_t> PrimeList::range_open_closed(double a, double b) const {
  auto first = std::upper_bound(primes_.begin(), primes_.end(), a,
                                [](double v, std::uint32_t p) { return v < static_cast<double>(p); });
  auto last = std::upper_bound(primes_.begin(), primes_.end(), b,
                               [](double v, std::uint32_t p) { return v < static_cast<double>(p); });
  return {static_cast<std::size_t>(first - primes_.begin()),
          static_cast<std::size_t>(last - primes_.begin())};
}

std::pair<std::size_t, std::size_t> PrimeList::range_closed(double a, double b) const {
  auto first = std::lower_bound(primes_.begin(), primes_.end(), a,
                                [](std::uint32_t p, double v) { return static_cast<double>(p) < v; });
  auto last = std::upper_bound(primes_.begin(), primes_.end(), b,
                               [](double v, std::uint32_t p) { return v < static_cast<double>(p); });
  return {static_cast<std::size_t>(first - primes_.begin()),
          static_cast<std::size_t>(last - primes_.begin())};
}

SpfTable SpfTable::build(std::uint64_t limit) {
  if (limit < 2) throw std::domain_error("SpfTable: limit must be >= 2");
  if (limit > kSieveCap) throw std::domain_error("SpfTable: limit exceeds sieve cap 2^31");
  SpfTable out;
  out.limit_ = limit;
  out.spf_.assign(limit + 1, 0);
  std::vector<std::uint32_t> primes;
  // Linear sieve: every composite is struck exactly once, by its smallest
  // prime factor.
  for (std::uint64_t n = 2; n <= limit; ++n) {
    if (out.spf_[n] == 0) {
      out.spf_[n] = static_cast<std::uint32_t>(n);
      primes.push_back(static_cast<std::uint32_t>(n));
    }
    for (std::uint32_t p : primes) {
      if (p > out.spf_[n] || p * n > limit) break;
      out.spf_[p * n] = p;
    }
  }
  return out;
}

std::vector<std::pair<std::uint64_t, int>> SpfTable::factorize(std::uint64_t n) const {
  if (n < 1 || n > limit_) throw std::domain_error("SpfTable::factorize: n out of range");
  std::vector<std::pair<std::uint64_t, int>> factors;
  while (n > 1) {
    const std::uint64_t p = spf_[n];
    int mult = 0;
    while (n % p == 0) {
      n /= p;
      ++mult;
    }
    factors.emplace_back(p, mult);
  }
  return factors;
}

namespace {

void check_rough_spec(const RoughSpec& spec) {
  if (spec.x < 1) throw std::domain_error("RoughSpec: x must be >= 1");
  if (spec.r < 2.0) throw std::domain_error("RoughSpec: R must be >= 2");
}

}  // namespace

std::uint64_t count_rough(const RoughSpec& spec, const SpfTable& spf) {
  check_rough_spec(spec);
  if (spec.x > spf.limit()) throw std::domain_error("count_rough: x exceeds table limit");
  std::uint64_t count = 1;  // n = 1
  for (std::uint64_t n = 2; n <= spec.x; ++n) {
    if (static_cast<double>(spf.spf(n)) >= spec.r) ++count;
  }
  return count;
}

std::vector<std::uint64_t> rough_members(const RoughSpec& spec, const SpfTable& spf) {
  check_rough_spec(spec);
  if (spec.x > spf.limit()) throw std::domain_error("rough_members: x exceeds table limit");
  std::vector<std::uint64_t> members{1};
  for (std::uint64_t n = 2; n <= spec.x; ++n) {
    if (static_cast<double>(spf.spf(n)) >= spec.r) members.push_back(n);
  }
  return members;
}

namespace {

std::uint64_t sieve_rough_count(std::uint64_t x, const std::vector<std::uint32_t>& small_primes) {
  // Mark multiples of each prime below R over [1, x] in blocks.
  constexpr std::uint64_t kBlock = 1 << 18;
  std::vector<char> hit(kBlock);
  std::uint64_t survivors = 0;
  for (std::uint64_t lo = 1; lo <= x; lo += kBlock) {
    const std::uint64_t hi = std::min(x, lo + kBlock - 1);
    std::fill(hit.begin(), hit.begin() + static_cast<std::ptrdiff_t>(hi - lo + 1), 0);
    for (std::uint32_t p : small_primes) {
      std::uint64_t first = ((lo + p - 1) / p) * p;
      for (std::uint64_t m = first; m <= hi; m += p) hit[m - lo] = 1;
    }
    for (std::uint64_t n = lo; n <= hi; ++n) survivors += hit[n - lo] == 0;
  }
  return survivors;
}

}  // namespace

std::uint64_t legendre_rough_count(const RoughSpec& spec) {
  check_rough_spec(spec);
  if (spec.x > 10'000'000) throw std::domain_error("legendre_rough_count: oracle limited to x <= 1e7");

  std::vector<std::uint32_t> small_primes;
  if (spec.r > 2.0) {
    const std::uint64_t below = static_cast<std::uint64_t>(std::ceil(spec.r)) - 1;
    if (below >= 2) {
      const auto composite = composite_flags(below);
      for (std::uint64_t n = 2; n <= below; ++n) {
        if (!composite[n] && static_cast<double>(n) < spec.r) {
          small_primes.push_back(static_cast<std::uint32_t>(n));
        }
      }
    }
  }
  if (small_primes.empty()) return spec.x;
  if (small_primes.size() > 25) return sieve_rough_count(spec.x, small_primes);

  // Signed sum over squarefree products d of primes below R: sum mu(d) floor(x/d).
  std::int64_t total = 0;
  const std::int64_t x = static_cast<std::int64_t>(spec.x);
  constexpr std::int64_t kGuard = std::numeric_limits<std::int64_t>::max() / 2;
  struct Frame {
    std::uint64_t d;
    std::size_t next;
    int sign;
  };
  std::vector<Frame> stack{{1, 0, +1}};
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    const std::int64_t term = f.sign * (x / static_cast<std::int64_t>(f.d));
    if (total > kGuard - std::abs(term) || total < -kGuard + std::abs(term)) {
      throw std::overflow_error("legendre_rough_count: signed accumulation overflow");
    }
    total += term;
    for (std::size_t i = f.next; i < small_primes.size(); ++i) {
      const std::uint64_t nd = f.d * small_primes[i];
      if (nd > spec.x) break;
      stack.push_back({nd, i + 1, -f.sign});
    }
  }
  return static_cast<std::uint64_t>(total);
}

std::uint64_t count_smooth(std::uint64_t x, double y, const SpfTable& spf) {
  if (x < 1) throw std::domain_error("count_smooth: x must be >= 1");
  if (x > spf.limit()) throw std::domain_error("count_smooth: x exceeds table limit");
  if (y < 2.0) return 1;  // only n = 1 has no prime factor
  std::vector<char> smooth(x + 1, 0);
  smooth[1] = 1;
  std::uint64_t count = 1;
  for (std::uint64_t n = 2; n <= x; ++n) {
    const std::uint64_t p = spf.spf(n);
    if (static_cast<double>(p) <= y && smooth[n / p]) {
      smooth[n] = 1;
      ++count;
    }
  }
  return count;
}

PrimeSums prime_sum(double a, double b, double sigma, double t, const PrimeList& primes) {
  if (a < 2.0) throw std::domain_error("prime_sum: a must be >= 2");
  if (b < a) throw std::domain_error("prime_sum: b must be >= a");
  if (b > static_cast<double>(primes.limit())) {
    throw std::domain_error("prime_sum: range exceeds prime list limit");
  }
  const auto [first, last] = primes.range_open_closed(a, b);
  KahanSum plain, cosine;
  const double expo = -(1.0 + 2.0 * sigma);
  for (std::size_t i = first; i < last; ++i) {
    const double lp = std::log(static_cast<double>(primes.values()[i]));
    const double w = std::exp(expo * lp);
    plain.add(w);
    cosine.add(2.0 * std::cos(t * lp) * w);
  }
  return {plain.value(), cosine.value()};
}

}  // namespace rmflab
