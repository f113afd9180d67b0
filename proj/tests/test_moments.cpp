#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "rmflab/moments.hpp"
#include "rmflab/ntcore.hpp"
#include "rmflab/rng.hpp"

using namespace rmflab;

namespace {

const SpfTable& spf_1e4() {
  static const SpfTable spf = SpfTable::build(10'000);
  return spf;
}

const PrimeList& primes_1e4() {
  static const PrimeList primes = PrimeList::build(10'000);
  return primes;
}

CoefficientSpec random_coeffs(std::int64_t n, std::uint64_t seed) {
  std::vector<std::complex<double>> values(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = {2.0 * unit_interval(derive_seed(seed, 2 * i)) - 1.0,
                 2.0 * unit_interval(derive_seed(seed, 2 * i + 1)) - 1.0};
  }
  return CoefficientSpec::dense(std::move(values));
}

}  // namespace

TEST_CASE("moment of the single-point sum is exactly one") {
  for (double two_q : {0.5, 1.0, 2.0, 4.0}) {
    const auto est = estimate_abs_moment(CoefficientSpec::dense({{1.0, 0.0}}), two_q, 200, 1,
                                         2, spf_1e4(), primes_1e4());
    CHECK(est.value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(est.stderr_ == 0.0);
  }
}

TEST_CASE("argument validation") {
  const auto ones = CoefficientSpec::all_ones(10);
  CHECK_THROWS_AS(estimate_abs_moment(ones, 2.0, 50, 1, 1, spf_1e4(), primes_1e4()),
                  std::domain_error);
  CHECK_THROWS_AS(estimate_abs_moment(ones, 5.0, 200, 1, 1, spf_1e4(), primes_1e4()),
                  std::domain_error);
  CHECK_THROWS_AS(estimate_abs_moment(ones, 0.0, 200, 1, 1, spf_1e4(), primes_1e4()),
                  std::domain_error);
}

TEST_CASE("second moment matches sum of squared moduli") {
  const auto est = estimate_abs_moment(CoefficientSpec::all_ones(1000), 2.0, 2000, 99, 2,
                                       spf_1e4(), primes_1e4());
  CHECK(std::abs(est.value - 1000.0) <= 4.0 * est.stderr_);

  CHECK(exact_second_moment(CoefficientSpec::all_ones(123)) == doctest::Approx(123.0));
  CHECK(exact_second_moment(CoefficientSpec::additive_char(321, std::sqrt(2.0))) ==
        doctest::Approx(321.0).epsilon(1e-12));
  CHECK(exact_second_moment(CoefficientSpec::rough(100, 10.0, spf_1e4())) ==
        doctest::Approx(22.0));
}

TEST_CASE("energy oracle: tiny cases by hand") {
  CHECK(energy_bruteforce(CoefficientSpec::dense({{1.0, 0.0}})) == doctest::Approx(1.0));
  CHECK(energy_bruteforce(CoefficientSpec::all_ones(2)) == doctest::Approx(6.0));
  CHECK(energy_bruteforce(CoefficientSpec::all_ones(3)) == doctest::Approx(15.0));
  CHECK(energy_fast(CoefficientSpec::all_ones(2)) == doctest::Approx(6.0));
  CHECK(energy_fast(CoefficientSpec::all_ones(3)) == doctest::Approx(15.0));
}

TEST_CASE("energy_fast agrees with the oracle on random vectors") {
  for (int rep = 0; rep < 20; ++rep) {
    const std::int64_t n = 17 + static_cast<std::int64_t>(derive_seed(55, static_cast<std::uint64_t>(rep)) % 284);
    const auto a = random_coeffs(n, 1000 + static_cast<std::uint64_t>(rep));
    const double slow = energy_bruteforce(a);
    const double fast = energy_fast(a);
    CAPTURE(n);
    CHECK(std::abs(fast - slow) <= 1e-7 * std::max(1.0, std::abs(slow)));
  }
}

TEST_CASE("fourth moment equals the multiplicative energy") {
  const auto a = CoefficientSpec::all_ones(100);
  const auto est = estimate_abs_moment(a, 4.0, 5000, 7, 2, spf_1e4(), primes_1e4());
  const double exact = energy_fast(a);
  CHECK(std::abs(est.value - exact) <= 5.0 * est.stderr_);
}

TEST_CASE("off-diagonal energy vanishes when all quadruples are diagonal") {
  CHECK(offdiag_energy(CoefficientSpec::dense({{1.0, 0.0}})) == doctest::Approx(0.0));
  CHECK(offdiag_energy(CoefficientSpec::all_ones(2)) == doctest::Approx(0.0));
  CHECK(offdiag_energy(CoefficientSpec::all_ones(3)) == doctest::Approx(0.0));
}

TEST_CASE("off-diagonal energy separates structured from typical coefficients") {
  const double r500 = offdiag_energy(CoefficientSpec::all_ones(500)) / (500.0 * 500.0);
  const double r2000 = offdiag_energy(CoefficientSpec::all_ones(2000)) / (2000.0 * 2000.0);
  CHECK(r2000 / r500 >= 1.2);

  const double a2000 =
      offdiag_energy(CoefficientSpec::additive_char(2000, std::sqrt(2.0))) / (2000.0 * 2000.0);
  CHECK(a2000 <= 3.0);
  const double a500 =
      offdiag_energy(CoefficientSpec::additive_char(500, std::sqrt(2.0))) / (500.0 * 500.0);
  CHECK(a500 <= 3.0);
}

TEST_CASE("holder chain") {
  const MomentEstimate unit2{1.0, 0.0, 100, 2.0, 0};
  const MomentEstimate unit4{1.0, 0.0, 100, 4.0, 0};
  const MomentEstimate unit1{1.0, 0.0, 100, 1.0, 0};
  CHECK(holder_chain_check(unit2, unit4, unit1));

  const MomentEstimate bad2{10.0, 0.0, 100, 2.0, 0};
  CHECK_FALSE(holder_chain_check(bad2, unit4, unit1));
  CHECK_THROWS_AS(holder_chain_check({0.0, 0.0, 100, 2.0, 0}, unit4, unit1), std::domain_error);

  const auto a = CoefficientSpec::all_ones(1000);
  const auto e1 = estimate_abs_moment(a, 1.0, 2000, 5, 2, spf_1e4(), primes_1e4());
  const auto e2 = estimate_abs_moment(a, 2.0, 2000, 6, 2, spf_1e4(), primes_1e4());
  const auto e4 = estimate_abs_moment(a, 4.0, 2000, 7, 2, spf_1e4(), primes_1e4());
  CHECK(holder_chain_check(e2, e4, e1));
}

TEST_CASE("standard error scales like 1/sqrt(trials)") {
  const auto a = CoefficientSpec::all_ones(300);
  const auto coarse = estimate_abs_moment(a, 2.0, 400, 21, 2, spf_1e4(), primes_1e4());
  const auto fine = estimate_abs_moment(a, 2.0, 1600, 22, 2, spf_1e4(), primes_1e4());
  const double ratio = coarse.stderr_ / fine.stderr_;
  CHECK(ratio >= 2.0 / 1.5);
  CHECK(ratio <= 2.0 * 1.5);
}

TEST_CASE("estimates are bitwise independent of the worker count") {
  const auto a = CoefficientSpec::all_ones(200);
  const auto w1 = estimate_abs_moment(a, 1.0, 300, 4242, 1, spf_1e4(), primes_1e4());
  const auto w4 = estimate_abs_moment(a, 1.0, 300, 4242, 4, spf_1e4(), primes_1e4());
  CHECK(w1.value == w4.value);
  CHECK(w1.stderr_ == w4.stderr_);
}
