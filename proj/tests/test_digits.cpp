#include "doctest.h"
#include "rdv/digits.hpp"
#include "testutil.hpp"

using namespace rdv;

TEST_CASE("digit round trips") {
  DigitSystem sys(10, 7, 3);
  auto dv = to_digits(203, sys);
  CHECK(dv == DigitVector{3, 0, 2});
  CHECK(from_digits(dv, sys) == 203);
  CHECK(to_digits(0, sys) == DigitVector{0, 0, 0});
  CHECK_THROWS_AS(to_digits(1000, sys), std::out_of_range);

  Rng rng(7);
  for (int i = 0; i < 1000; ++i) {
    mpz_class n = int64_t(rng.below(uint64_t(1000)));
    CHECK(from_digits(to_digits(n, sys), sys) == n);
  }
}

TEST_CASE("for_target picks g^{k-1} <= N < g^k") {
  for (uint64_t N : {1ULL, 9ULL, 10ULL, 99ULL, 100ULL, 999999ULL, 1000000ULL}) {
    auto sys = DigitSystem::for_target(mpz_class(long(N)), 10, 7);
    mpz_class M = sys.modulus();
    CHECK(M > N);
    CHECK(M <= mpz_class(long(N)) * 10);
  }
}

TEST_CASE("membership basics") {
  DigitSystem sys(10, 7, 2);
  CHECK_FALSE(is_restricted(17, sys));
  CHECK(is_restricted(1, sys));
  CHECK_FALSE(is_restricted(0, sys));  // 0 is never a member
  int count = 0;
  for (int n = 1; n <= 99; ++n)
    if (is_restricted(n, sys)) ++count;
  CHECK(count == 80);
}

TEST_CASE("membership agrees with a digit scan of to_digits output") {
  for (uint32_t b = 0; b < 10; ++b) {
    DigitSystem sys(10, b, 6);
    for (uint64_t n = 1; n <= 1000000; n += 7) {  // arithmetic subsample
      bool scan = true;
      if (n < 1000000) {
        auto dv = to_digits(mpz_class((unsigned long)n), sys);
        // ignore padding zeros above the canonical length
        size_t len = dv.size();
        while (len > 1 && dv[len - 1] == 0) --len;
        for (size_t j = 0; j < len; ++j)
          if (dv[j] == b) scan = false;
        CHECK(is_restricted(mpz_class((unsigned long)n), sys) == scan);
      }
    }
  }
}

TEST_CASE("enumeration") {
  DigitSystem sys(10, 7, 2);
  auto v = enumerate_restricted(10, sys);
  CHECK(v == std::vector<uint64_t>({1, 2, 3, 4, 5, 6, 8, 9}));
  CHECK(enumerate_restricted(100, sys).size() == 80);

  DigitSystem sys0(10, 0, 2);
  CHECK(enumerate_restricted(100, sys0).size() == 90);

  // agrees with filtering
  for (uint32_t b : {0u, 3u, 9u}) {
    DigitSystem s(10, b, 3);
    auto e = enumerate_restricted(1000, s);
    std::vector<uint64_t> f;
    for (uint64_t n = 1; n < 1000; ++n)
      if (is_restricted_u64(n, 10, b)) f.push_back(n);
    CHECK(e == f);
  }
}
