#include "doctest.h"
#include "rdv/numtheory.hpp"

using namespace rdv;

TEST_CASE("sieve tables match direct definitions at small limits") {
  auto t = build_tables(10);
  // mu(1..9) = 1,-1,-1,0,-1,1,-1,0,0
  int8_t expect[10] = {0, 1, -1, -1, 0, -1, 1, -1, 0, 0};
  for (int n = 1; n < 10; ++n) CHECK(t.mobius[n] == expect[n]);
  CHECK(t.von_mangoldt[8] == doctest::Approx(std::log(2.0)));
  CHECK(t.von_mangoldt[6] == 0.0);
  CHECK(t.euler_phi[9] == 6);
}

TEST_CASE("table invariants") {
  auto t = build_tables(5000);
  for (uint64_t n = 2; n < t.limit; ++n) {
    uint32_t p = t.smallest_prime_factor[n];
    CHECK(n % p == 0);
    CHECK(t.is_prime(p));
  }
  // sum_{d|n} phi(d) = n
  for (uint64_t n : {1ULL, 12ULL, 360ULL, 4096ULL, 4999ULL}) {
    uint64_t s = 0;
    for (uint64_t d = 1; d <= n; ++d)
      if (n % d == 0) s += t.euler_phi[d];
    CHECK(s == n);
  }
  // mobius vanishes at p^2 m
  CHECK(t.mobius[4] == 0);
  CHECK(t.mobius[2 * 2 * 3] == 0);
  CHECK(t.mobius[30] == -1);
}

TEST_CASE("multiplicativity spot checks on random coprime pairs") {
  auto t = build_tables(1000000);
  Rng rng(12345);
  int done = 0;
  while (done < 1000) {
    uint64_t a = 2 + rng.below(900);
    uint64_t b = 2 + rng.below(900);
    if (gcd_u64(a, b) != 1) continue;
    CHECK(t.divisor_count[a * b] == t.divisor_count[a] * t.divisor_count[b]);
    CHECK(t.euler_phi[a * b] == uint64_t(t.euler_phi[a]) * t.euler_phi[b]);
    ++done;
  }
}

TEST_CASE("Chebyshev sanity: psi(x)/x near 1") {
  auto t = build_tables(1000001);
  for (uint64_t x : {10000ULL, 100000ULL, 1000000ULL}) {
    double s = 0;
    for (uint64_t n = 1; n <= x; ++n) s += t.von_mangoldt[n];
    CHECK(s / double(x) > 0.8);
    CHECK(s / double(x) < 1.2);
  }
}

TEST_CASE("ramanujan sum closed form vs direct sum") {
  CHECK(ramanujan_sum(1, 0) == 1.0);
  CHECK(ramanujan_sum(1, 77) == 1.0);
  CHECK(ramanujan_sum(7, 14) == 6.0);   // q = p, p | n
  CHECK(ramanujan_sum(4, 2) == -2.0);
  for (uint64_t q = 1; q <= 60; ++q)
    for (int64_t n = -25; n <= 25; ++n)
      CHECK(ramanujan_sum(q, n) ==
            doctest::Approx(ramanujan_sum_direct(q, n)).epsilon(1e-9));
}

TEST_CASE("p-adic valuation") {
  CHECK(p_adic_valuation(uint64_t(12), 2) == 2);
  CHECK(p_adic_valuation(uint64_t(12), 5) == 0);
  CHECK(p_adic_valuation(uint64_t(3) << 30, 2) == 30);
  CHECK(p_adic_valuation(mpz_class("1267650600228229401496703205376"), 2) == 100);
  CHECK_THROWS_AS(p_adic_valuation(uint64_t(10), 4), std::invalid_argument);
  CHECK_THROWS_AS(p_adic_valuation(uint64_t(0), 2), std::invalid_argument);
}

TEST_CASE("resource cap") {
  CHECK_THROWS_AS(build_tables(1000, 100), resource_error);
}
