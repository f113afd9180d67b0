#include "rmflab/moments.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "rmflab/kahan.hpp"
#include "rmflab/parallel.hpp"
#include "rmflab/rng.hpp"
#include "rmflab/sampler.hpp"

namespace rmflab {

MomentEstimate estimate_abs_moment(const CoefficientSpec& coeffs, double two_q,
                                   std::int64_t trials, std::uint64_t master_seed, int workers,
                                   const SpfTable& spf, const PrimeList& primes) {
  if (!(two_q > 0.0) || two_q > 4.0) {
    throw std::domain_error("estimate_abs_moment: need 0 < 2q <= 4");
  }
  if (trials < 100) throw std::domain_error("estimate_abs_moment: need trials >= 100");
  const std::uint64_t limit = static_cast<std::uint64_t>(std::max<std::int64_t>(coeffs.size(), 2));
  if (limit > primes.limit() || static_cast<std::uint64_t>(coeffs.size()) > spf.limit()) {
    throw std::domain_error("estimate_abs_moment: N exceeds sieve limit");
  }

  std::vector<double> values(static_cast<std::size_t>(trials));
  struct Workspace {
    RmfSample sample;
    std::vector<std::complex<double>> f;
  };
  thread_local Workspace ws;
  parallel_for(trials, workers, [&](std::int64_t i) {
    RmfSample::generate_into(ws.sample, limit, Model::kSteinhaus, derive_seed(master_seed, static_cast<std::uint64_t>(i)), primes);
    const std::complex<double> s = partial_sum(ws.sample, coeffs, spf, ws.f);
    values[static_cast<std::size_t>(i)] = std::pow(std::abs(s), two_q);
  });

  KahanSum total;
  for (double v : values) total.add(v);
  const double mean = total.value() / static_cast<double>(trials);
  KahanSum sq;
  for (double v : values) sq.add((v - mean) * (v - mean));
  const double sample_var = sq.value() / static_cast<double>(trials - 1);
  const double se = std::sqrt(sample_var / static_cast<double>(trials));
  return {mean, se, trials, two_q, master_seed};
}

double exact_second_moment(const CoefficientSpec& coeffs) {
  KahanSum acc;
  for (const auto& a : coeffs.values()) acc.add(std::norm(a));
  return acc.value();
}

double energy_bruteforce(const CoefficientSpec& coeffs) {
  const std::int64_t n = coeffs.size();
  if (n > 5000) throw std::domain_error("energy_bruteforce: oracle limited to N <= 5000");
  const auto& a = coeffs.values();
  // c_P = sum_{mn = P} a(m) a(n), accumulated per block of products so the
  // buffer stays direct-indexed.
  constexpr std::int64_t kBlock = 1 << 20;
  std::vector<std::complex<double>> buf;
  KahanSum energy;
  const std::int64_t p_max = n * n;
  for (std::int64_t lo = 1; lo <= p_max; lo += kBlock) {
    const std::int64_t hi = std::min(p_max, lo + kBlock - 1);
    buf.assign(static_cast<std::size_t>(hi - lo + 1), {0.0, 0.0});
    for (std::int64_t m = 1; m <= n; ++m) {
      if (a[static_cast<std::size_t>(m - 1)] == 0.0) continue;
      const std::int64_t first = std::max<std::int64_t>(1, (lo + m - 1) / m);
      const std::int64_t last = std::min<std::int64_t>(n, hi / m);
      const std::complex<double> am = a[static_cast<std::size_t>(m - 1)];
      for (std::int64_t k = first; k <= last; ++k) {
        buf[static_cast<std::size_t>(m * k - lo)] += am * a[static_cast<std::size_t>(k - 1)];
      }
    }
    for (const auto& c : buf) energy.add(std::norm(c));
  }
  return energy.value();
}

double energy_fast(const CoefficientSpec& coeffs) {
  const std::int64_t n = coeffs.size();
  if (n > 1'000'000) throw std::domain_error("energy_fast: limited to N <= 1e6");
  const auto& a = coeffs.values();
  // E_x = sum over coprime (e, f) of |T(e, f)|^2, T(e, f) = sum_d a(de) conj(a(df)).
  KahanSum energy;
  for (std::int64_t e = 1; e <= n; ++e) {
    for (std::int64_t f = 1; f <= n; ++f) {
      const std::int64_t d_max = n / std::max(e, f);
      if (std::gcd(e, f) != 1) continue;
      std::complex<double> t{0.0, 0.0};
      for (std::int64_t d = 1; d <= d_max; ++d) {
        t += a[static_cast<std::size_t>(d * e - 1)] * std::conj(a[static_cast<std::size_t>(d * f - 1)]);
      }
      energy.add(std::norm(t));
    }
  }
  return energy.value();
}

double offdiag_energy(const CoefficientSpec& coeffs) {
  KahanSum sum2, sum4;
  for (const auto& v : coeffs.values()) {
    const double m2 = std::norm(v);
    sum2.add(m2);
    sum4.add(m2 * m2);
  }
  const double diag = 2.0 * sum2.value() * sum2.value() - sum4.value();
  return energy_fast(coeffs) - diag;
}

bool holder_chain_check(const MomentEstimate& e2, const MomentEstimate& e4,
                        const MomentEstimate& e1) {
  if (!(e1.value > 0.0) || !(e2.value > 0.0) || !(e4.value > 0.0)) {
    throw std::domain_error("holder_chain_check: moments must be positive");
  }
  const double rel = e2.stderr_ / e2.value + e4.stderr_ / (3.0 * e4.value) +
                     2.0 * e1.stderr_ / (3.0 * e1.value);
  const double rhs = std::cbrt(e4.value) * std::pow(e1.value, 2.0 / 3.0);
  return e2.value <= rhs * (1.0 + 5.0 * rel);
}

}  // namespace rmflab
