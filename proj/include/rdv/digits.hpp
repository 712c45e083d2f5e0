#pragma once

// Base-g digit expansions and the restricted set S_b (positive integers with
// no digit equal to b). Little-endian order throughout: digits[j] is the
// coefficient of g^j.

#include <cstdint>
#include <vector>

#include "rdv/util.hpp"

namespace rdv {

struct DigitSystem {
  uint32_t g;  // base, >= 3
  uint32_t b;  // forbidden digit in [0, g-1]
  uint32_t k;  // digit window length, >= 1

  DigitSystem(uint32_t g_, uint32_t b_, uint32_t k_) : g(g_), b(b_), k(k_) {
    if (g < 3) throw std::invalid_argument("DigitSystem: base must be >= 3");
    if (b >= g) throw std::invalid_argument("DigitSystem: forbidden digit out of range");
    if (k < 1) throw std::invalid_argument("DigitSystem: k must be >= 1");
  }

  // Smallest window with g^{k-1} <= N < g^k.
  static DigitSystem for_target(const mpz_class& N, uint32_t g, uint32_t b);

  mpz_class modulus() const;  // g^k
};

using DigitVector = std::vector<uint32_t>;

// Little-endian digits of n, padded with zeros to length sys.k.
// Requires 0 <= n < g^k.
DigitVector to_digits(const mpz_class& n, const DigitSystem& sys);
mpz_class from_digits(const DigitVector& dv, const DigitSystem& sys);

// Digits of an arbitrary nonnegative integer (canonical length, no padding;
// n = 0 gives {0}).
DigitVector to_digits_unbounded(const mpz_class& n, uint32_t g);

// Membership in S_b: n >= 1 and the canonical base-g expansion avoids b.
// 0 is never a member.
bool is_restricted(const mpz_class& n, const DigitSystem& sys);
bool is_restricted_u64(uint64_t n, uint32_t g, uint32_t b);

// Strictly increasing members of S_b below `limit` (limit <= g^k).
std::vector<uint64_t> enumerate_restricted(uint64_t limit, const DigitSystem& sys);

}  // namespace rdv
