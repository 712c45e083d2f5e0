#include "rdv/numtheory.hpp"

#include <cmath>

namespace rdv {

ArithmeticTables build_tables(uint64_t limit, uint64_t cap) {
  if (limit < 2) throw std::invalid_argument("build_tables: limit must be >= 2");
  if (limit > cap)
    throw resource_error("build_tables: limit " + std::to_string(limit) +
                         " exceeds cap " + std::to_string(cap));

  ArithmeticTables t;
  t.limit = limit;
  t.smallest_prime_factor.assign(limit, 0);
  t.mobius.assign(limit, 0);
  t.euler_phi.assign(limit, 0);
  t.divisor_count.assign(limit, 0);
  t.von_mangoldt.assign(limit, 0.0);

  // tau via the (spf-exponent) recurrence: tau_e[n] = v_spf(n) + 1.
  std::vector<uint8_t> spf_exp(limit, 0);

  if (limit > 1) {
    t.mobius[1] = 1;
    t.euler_phi[1] = 1;
    t.divisor_count[1] = 1;
  }

  for (uint64_t n = 2; n < limit; ++n) {
    if (t.smallest_prime_factor[n] == 0) {
      t.smallest_prime_factor[n] = uint32_t(n);
      t.mobius[n] = -1;
      t.euler_phi[n] = uint32_t(n - 1);
      t.divisor_count[n] = 2;
      spf_exp[n] = 1;
      t.primes.push_back(uint32_t(n));
    }
    for (uint32_t p : t.primes) {
      if (p > t.smallest_prime_factor[n] || uint64_t(p) * n >= limit) break;
      uint64_t np = uint64_t(p) * n;
      t.smallest_prime_factor[np] = p;
      if (n % p == 0) {
        t.mobius[np] = 0;
        t.euler_phi[np] = uint32_t(t.euler_phi[n] * p);
        spf_exp[np] = uint8_t(spf_exp[n] + 1);
        t.divisor_count[np] =
            t.divisor_count[n] / (spf_exp[n] + 1) * (spf_exp[n] + 2);
      } else {
        t.mobius[np] = int8_t(-t.mobius[n]);
        t.euler_phi[np] = uint32_t(t.euler_phi[n] * (p - 1));
        spf_exp[np] = 1;
        t.divisor_count[np] = uint32_t(t.divisor_count[n] * 2);
      }
    }
  }

  // Lambda: ln p at prime powers.
  for (uint32_t p : t.primes) {
    double lp = std::log(double(p));
    for (uint64_t pe = p; pe < limit; pe *= p) {
      t.von_mangoldt[pe] = lp;
      if (pe > (limit - 1) / p) break;
    }
  }
  return t;
}

bool is_prime_u64(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t d : {2ULL, 3ULL, 5ULL, 7ULL}) {
    if (n == d) return true;
    if (n % d == 0) return false;
  }
  // deterministic Miller-Rabin for 64-bit
  uint64_t d = n - 1;
  int r = 0;
  while ((d & 1) == 0) d >>= 1, ++r;
  for (uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL,
                     29ULL, 31ULL, 37ULL}) {
    if (a % n == 0) continue;
    uint64_t x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < r; ++i) {
      x = mulmod_u64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<std::pair<uint64_t, uint32_t>> factorize_u64(uint64_t n) {
  std::vector<std::pair<uint64_t, uint32_t>> f;
  for (uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p == 0) {
      uint32_t e = 0;
      while (n % p == 0) n /= p, ++e;
      f.emplace_back(p, e);
    }
  }
  if (n > 1) f.emplace_back(n, 1);
  return f;
}

int mobius_u64(uint64_t n) {
  if (n == 0) throw std::invalid_argument("mobius: n >= 1 required");
  int m = 1;
  for (auto [p, e] : factorize_u64(n)) {
    if (e > 1) return 0;
    m = -m;
  }
  return m;
}

uint64_t euler_phi_u64(uint64_t n) {
  uint64_t r = n;
  for (auto [p, e] : factorize_u64(n)) r = r / p * (p - 1);
  return r;
}

double ramanujan_sum(uint64_t q, int64_t n) {
  if (q == 0) throw std::invalid_argument("ramanujan_sum: q >= 1 required");
  uint64_t na = n >= 0 ? uint64_t(n) : uint64_t(-n);
  uint64_t g = gcd_u64(q, na % q);  // gcd(q, 0) = q
  uint64_t m = q / g;
  int mu = mobius_u64(m);
  if (mu == 0) return 0.0;
  return double(mu) * double(euler_phi_u64(q)) / double(euler_phi_u64(m));
}

double ramanujan_sum_direct(uint64_t q, int64_t n) {
  if (q == 1) return 1.0;
  uint64_t nm = uint64_t(((n % int64_t(q)) + int64_t(q)) % int64_t(q));
  double re = 0.0;
  for (uint64_t a = 1; a < q; ++a) {
    if (gcd_u64(a, q) != 1) continue;
    re += std::cos(2.0 * kPi * double(mulmod_u64(a, nm, q)) / double(q));
  }
  return re;
}

uint32_t p_adic_valuation(uint64_t x, uint64_t p) {
  if (x == 0) throw std::invalid_argument("p_adic_valuation: x >= 1 required");
  if (!is_prime_u64(p)) throw std::invalid_argument("p_adic_valuation: p must be prime");
  uint32_t e = 0;
  while (x % p == 0) x /= p, ++e;
  return e;
}

uint32_t p_adic_valuation(const mpz_class& x, uint64_t p) {
  if (x <= 0) throw std::invalid_argument("p_adic_valuation: x >= 1 required");
  if (!is_prime_u64(p)) throw std::invalid_argument("p_adic_valuation: p must be prime");
  mpz_class v = x;
  uint32_t e = 0;
  while (mpz_divisible_ui_p(v.get_mpz_t(), static_cast<unsigned long>(p))) {
    mpz_divexact_ui(v.get_mpz_t(), v.get_mpz_t(), static_cast<unsigned long>(p));
    ++e;
  }
  return e;
}

}  // namespace rdv
