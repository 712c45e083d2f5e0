#pragma once

// Shared helpers for the test suites: brute-force membership, reference
// convolution counters, and a chi-square quantile for the uniformity test.

#include <cmath>
#include <cstdint>
#include <vector>

#include "rdv/digits.hpp"

namespace rdvtest {

// Membership of n in {0} u S_b (canonical expansion; 0 counted only when
// include_zero), with an optional coprime-to-g constraint.
inline bool member(uint64_t n, uint32_t g, uint32_t b, bool include_zero,
                   bool coprime) {
  if (n == 0) return include_zero && !coprime;
  if (coprime && rdv::gcd_u64(n % g, g) != 1) return false;
  return rdv::is_restricted_u64(n, g, b);
}

// counts[T] = #{(x_1..x_m): sum = T, all member}, for T <= tmax, by direct
// pair/triple enumeration (convolution form).
inline std::vector<uint64_t> brute_counts(uint32_t g, uint32_t b, int m,
                                          bool include_zero, bool coprime,
                                          uint64_t tmax) {
  std::vector<uint8_t> mem(tmax + 1, 0);
  for (uint64_t n = 0; n <= tmax; ++n)
    mem[n] = member(n, g, b, include_zero, coprime) ? 1 : 0;
  std::vector<uint64_t> c1(tmax + 1, 0);
  for (uint64_t n = 0; n <= tmax; ++n) c1[n] = mem[n];
  std::vector<uint64_t> cur = c1;
  for (int i = 1; i < m; ++i) {
    std::vector<uint64_t> nxt(tmax + 1, 0);
    for (uint64_t a = 0; a <= tmax; ++a) {
      if (!cur[a]) continue;
      for (uint64_t x = 0; a + x <= tmax; ++x)
        if (mem[x]) nxt[a + x] += cur[a];
    }
    cur = std::move(nxt);
  }
  return cur;
}

// Regularized lower incomplete gamma P(a, x), series + continued fraction.
inline double reg_gamma_p(double a, double x) {
  if (x < 0 || a <= 0) return 0;
  if (x == 0) return 0;
  double gln = std::lgamma(a);
  if (x < a + 1.0) {
    double ap = a, sum = 1.0 / a, del = sum;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - gln);
  }
  // continued fraction for Q
  double b = x + 1.0 - a, c = 1e300, d = 1.0 / b, h = d;
  for (int i = 1; i < 500; ++i) {
    double an = -double(i) * (double(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < 1e-300) d = 1e-300;
    c = b + an / c;
    if (std::fabs(c) < 1e-300) c = 1e-300;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-15) break;
  }
  double q = std::exp(-x + a * std::log(x) - gln) * h;
  return 1.0 - q;
}

// Quantile of the chi-square distribution with df degrees of freedom.
inline double chi2_quantile(double p, double df) {
  double lo = 0, hi = df + 200.0 * std::sqrt(2.0 * df) + 200.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (reg_gamma_p(df / 2.0, mid / 2.0) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace rdvtest
