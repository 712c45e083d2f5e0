#pragma once

// Arithmetic base layer: linear sieve tables and the multiplicative
// functions used everywhere else (mu, phi, tau, Lambda, spf), plus Ramanujan
// sums and p-adic valuations.

#include <cstdint>
#include <vector>

#include "rdv/util.hpp"

namespace rdv {

inline constexpr uint64_t kDefaultTableCap = 200'000'000;

struct ArithmeticTables {
  uint64_t limit = 0;  // arrays cover [0, limit)
  std::vector<uint32_t> smallest_prime_factor;
  std::vector<int8_t> mobius;
  std::vector<uint32_t> euler_phi;
  std::vector<uint32_t> divisor_count;
  std::vector<double> von_mangoldt;  // ln p at prime powers, else 0
  std::vector<uint32_t> primes;

  bool is_prime(uint64_t n) const {
    return n >= 2 && n < limit && smallest_prime_factor[n] == n;
  }
};

// Linear sieve; deterministic. Throws resource_error above `cap`.
ArithmeticTables build_tables(uint64_t limit, uint64_t cap = kDefaultTableCap);

// Factorization of n via trial division (works for any 64-bit n).
std::vector<std::pair<uint64_t, uint32_t>> factorize_u64(uint64_t n);

// Multiplicative helpers on arbitrary 64-bit arguments (not table-bounded).
int mobius_u64(uint64_t n);
uint64_t euler_phi_u64(uint64_t n);

// Closed form mu(q/(q,n)) * phi(q) / phi(q/(q,n)); integer-valued.
double ramanujan_sum(uint64_t q, int64_t n);

// Direct exponential sum over units mod q; test oracle for the closed form.
double ramanujan_sum_direct(uint64_t q, int64_t n);

// Largest e with p^e | x. Throws std::invalid_argument unless p is prime.
uint32_t p_adic_valuation(uint64_t x, uint64_t p);
uint32_t p_adic_valuation(const mpz_class& x, uint64_t p);

bool is_prime_u64(uint64_t n);

}  // namespace rdv
