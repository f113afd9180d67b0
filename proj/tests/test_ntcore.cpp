#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>

#include "rmflab/ntcore.hpp"
#include "rmflab/rng.hpp"

using namespace rmflab;

namespace {

// Trial-division oracle, independent of the sieve.
std::vector<std::pair<std::uint64_t, int>> trial_factorize(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, int>> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    int mult = 0;
    while (n % p == 0) {
      n /= p;
      ++mult;
    }
    out.emplace_back(p, mult);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

const SpfTable& table_1e5() {
  static const SpfTable table = SpfTable::build(100'000);
  return table;
}

}  // namespace

TEST_CASE("spf table for small n") {
  const auto spf = SpfTable::build(10);
  const std::uint32_t expected[] = {2, 3, 2, 5, 2, 7, 2, 3, 2};
  for (std::uint64_t n = 2; n <= 10; ++n) {
    CHECK(spf.spf(n) == expected[n - 2]);
  }
  CHECK_THROWS_AS(SpfTable::build(1), std::domain_error);
}

TEST_CASE("spf invariants and factorization against trial division") {
  const auto& spf = table_1e5();
  CHECK(spf.spf(49) == 7);
  CHECK(spf.spf(360) == 2);
  const auto f360 = spf.factorize(360);
  REQUIRE(f360.size() == 3);
  CHECK(f360[0] == std::pair<std::uint64_t, int>{2, 3});
  CHECK(f360[1] == std::pair<std::uint64_t, int>{3, 2});
  CHECK(f360[2] == std::pair<std::uint64_t, int>{5, 1});

  for (std::uint64_t n = 2; n <= 3000; ++n) {
    CHECK(n % spf.spf(n) == 0);
    if (spf.is_prime(n)) {
      CHECK(trial_factorize(n).size() == 1);
    } else {
      const std::uint64_t p = spf.spf(n);
      CHECK(p <= n / p);
    }
    CHECK(spf.factorize(n) == trial_factorize(n));
  }
}

TEST_CASE("rough counts: stated values") {
  const auto& spf = table_1e5();
  CHECK(count_rough({10, 2.0}, spf) == 10);
  CHECK(count_rough({5, 6.0}, spf) == 1);
  CHECK(count_rough({100, 10.0}, spf) == 22);
  CHECK(legendre_rough_count({100, 3.0}) == 50);
  CHECK(legendre_rough_count({30, 5.0}) == 10);
}

TEST_CASE("rough members agree with the count and with factorization") {
  const auto& spf = table_1e5();
  const RoughSpec spec{500, 7.0};
  const auto members = rough_members(spec, spf);
  CHECK(members.size() == count_rough(spec, spf));
  CHECK(members.front() == 1);
  for (std::size_t i = 1; i < members.size(); ++i) {
    CHECK(members[i] > members[i - 1]);
    for (const auto& [p, mult] : trial_factorize(members[i])) {
      (void)mult;
      CHECK(static_cast<double>(p) >= spec.r);
    }
  }
}

TEST_CASE("legendre oracle matches the spf count on random inputs") {
  const auto& spf = table_1e5();
  for (int i = 0; i < 60; ++i) {
    const std::uint64_t x = 1 + derive_seed(11, static_cast<std::uint64_t>(i)) % 100'000;
    const double r = 2.0 + static_cast<double>(derive_seed(13, static_cast<std::uint64_t>(i)) % 980) / 10.0;
    CAPTURE(x);
    CAPTURE(r);
    CHECK(count_rough({x, r}, spf) == legendre_rough_count({x, r}));
  }
}

TEST_CASE("rough count monotone in R; sieve density band") {
  const auto& spf = table_1e5();
  std::uint64_t prev = count_rough({20'000, 2.0}, spf);
  for (double r : {3.0, 5.0, 11.0, 31.0, 97.0}) {
    const std::uint64_t cur = count_rough({20'000, r}, spf);
    CHECK(cur <= prev);
    prev = cur;
  }
  for (double r : {3.0, 10.0, 50.0, 97.0}) {
    const double density = static_cast<double>(count_rough({10'000, r}, spf)) * std::log(r) / 10'000.0;
    CAPTURE(r);
    CHECK(density >= 0.1);
    CHECK(density <= 3.0);
  }
}

TEST_CASE("smooth counts") {
  const auto& spf = table_1e5();
  CHECK(count_smooth(20, 3.0, spf) == 10);  // {1,2,3,4,6,8,9,12,16,18}
  CHECK(count_smooth(1000, 1000.0, spf) == 1000);
  CHECK(count_smooth(10, 1.0, spf) == 1);
  std::uint64_t prev = count_smooth(5000, 2.0, spf);
  for (double y : {3.0, 5.0, 7.0, 50.0, 5000.0}) {
    const std::uint64_t cur = count_smooth(5000, y, spf);
    CHECK(cur >= prev);
    prev = cur;
  }
}

TEST_CASE("prime sums over (a, b]") {
  const auto primes = PrimeList::build(1'000'000);
  const auto s = prime_sum(2.0, 10.0, 0.0, 0.0, primes);
  const double expected = 1.0 / 3.0 + 1.0 / 5.0 + 1.0 / 7.0;
  CHECK(s.plain == doctest::Approx(expected).epsilon(1e-12));
  CHECK(s.cosine == doctest::Approx(2.0 * expected).epsilon(1e-12));

  const auto empty = prime_sum(10.0, 10.0, 0.0, 0.5, primes);
  CHECK(empty.plain == 0.0);
  CHECK(empty.cosine == 0.0);

  const auto decor = prime_sum(500.0, 1e6, 0.0, 0.5, primes);
  CHECK(std::abs(decor.cosine) <= 5.0);

  CHECK_THROWS_AS(prime_sum(2.0, 2e6, 0.0, 0.0, primes), std::domain_error);
  CHECK_THROWS_AS(prime_sum(1.0, 10.0, 0.0, 0.0, primes), std::domain_error);
}

TEST_CASE("mertens-type band for the prime sum") {
  const auto primes = PrimeList::build(1'000'000);
  for (double x : {1e5, 1e6}) {
    const double s = prime_sum(11.0, x, 0.0, 0.0, primes).plain;
    const double target = std::log(std::log(x) / std::log(11.0));
    CAPTURE(x);
    CHECK(std::abs(s - target) <= 1.5);
  }
}
