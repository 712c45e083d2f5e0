#pragma once

// Shared plumbing: error types, deterministic RNG, chunked reductions.

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>
#include <limits>
#include <algorithm>

#include <gmpxx.h>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rdv {

using cplx = std::complex<double>;

// Raised when a configured memory/size cap would be exceeded. CLI maps this
// to exit code 2.
class resource_error : public std::runtime_error {
 public:
  explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr double kPi = 3.14159265358979323846;

// e(x) = exp(2*pi*i*x)
inline cplx unit_phase(double x) {
  double a = 2.0 * kPi * x;
  return {std::cos(a), std::sin(a)};
}

// ---------------------------------------------------------------------------
// Deterministic RNG. std::uniform_int_distribution is implementation-defined,
// so all sampling goes through these helpers instead.
// ---------------------------------------------------------------------------

struct SplitMix64 {
  uint64_t state;
  explicit SplitMix64(uint64_t seed) : state(seed) {}
  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
};

// xoshiro256** seeded through SplitMix64.
class Rng {
 public:
  explicit Rng(uint64_t seed) {
    SplitMix64 sm(seed);
    for (auto& w : s_) w = sm.next();
  }

  uint64_t next_u64() {
    uint64_t result = rotl(s_[1] * 5, 7) * 9;
    uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform in [0, n), n >= 1, by rejection.
  uint64_t below(uint64_t n) {
    if (n <= 1) return 0;
    uint64_t limit = ~uint64_t(0) - (~uint64_t(0) % n);
    for (;;) {
      uint64_t v = next_u64();
      if (v < limit) return v % n;
    }
  }

  // Uniform in [0, n) for big n.
  mpz_class below(const mpz_class& n) {
    if (n <= 1) return 0;
    if (n.fits_ulong_p()) return mpz_class(below(uint64_t(n.get_ui())));
    size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
    size_t words = (bits + 63) / 64;
    for (;;) {
      mpz_class v = 0;
      for (size_t i = 0; i < words; ++i) {
        v <<= 64;
        v += mpz_class(next_u64());
      }
      uint64_t excess = words * 64 - bits;
      v >>= excess;
      if (v < n) return v;
    }
  }

  double uniform01() { return double(next_u64() >> 11) * 0x1.0p-53; }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  uint64_t s_[4];
};

// Derive an independent stream for a sub-task.
inline uint64_t derive_seed(uint64_t seed, uint64_t index) {
  SplitMix64 sm(seed ^ (0xa0761d6478bd642fULL + index * 0xe7037ed1a0b428dbULL));
  sm.next();
  return sm.next();
}

// ---------------------------------------------------------------------------
// Deterministic parallel reductions. Work is split into fixed-size chunks and
// chunk results are combined in index order, so the output is bit-identical
// regardless of thread count.
// ---------------------------------------------------------------------------

inline int requested_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline void set_thread_count(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

// body(i) fills slot i; slots are independent.
template <class Body>
void parallel_for_index(int64_t n, Body&& body) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
  for (int64_t i = 0; i < n; ++i) body(i);
}

// Sum of term(i) for i in [0, n); per-chunk sums are sequential, chunks are
// combined in fixed order.
template <class T, class Term>
T chunked_sum(int64_t n, Term&& term, int64_t chunk_size = 4096) {
  if (n <= 0) return T{};
  int64_t chunks = (n + chunk_size - 1) / chunk_size;
  std::vector<T> partial(size_t(chunks), T{});
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
  for (int64_t c = 0; c < chunks; ++c) {
    T acc{};
    int64_t lo = c * chunk_size, hi = std::min(n, lo + chunk_size);
    for (int64_t i = lo; i < hi; ++i) acc += term(i);
    partial[size_t(c)] = acc;
  }
  T total{};
  for (auto& p : partial) total += p;
  return total;
}

// Max of value(i); ties resolved toward the smaller index.
template <class Value>
std::pair<double, int64_t> parallel_max(int64_t n, Value&& value) {
  std::vector<double> vals(static_cast<size_t>(n), 0.0);
  parallel_for_index(n, [&](int64_t i) { vals[size_t(i)] = value(i); });
  double best = -std::numeric_limits<double>::infinity();
  int64_t arg = -1;
  for (int64_t i = 0; i < n; ++i)
    if (vals[size_t(i)] > best) {
      best = vals[size_t(i)];
      arg = i;
    }
  return {best, arg};
}

inline uint64_t gcd_u64(uint64_t a, uint64_t b) {
  while (b) {
    uint64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
  return uint64_t((__uint128_t)a * b % m);
}

inline uint64_t powmod_u64(uint64_t base, uint64_t exp, uint64_t m) {
  uint64_t r = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) r = mulmod_u64(r, base, m);
    base = mulmod_u64(base, base, m);
    exp >>= 1;
  }
  return r;
}

// Modular inverse; m need not be prime but gcd(a, m) must be 1.
inline uint64_t invmod_u64(uint64_t a, uint64_t m) {
  int64_t t = 0, newt = 1;
  int64_t r = int64_t(m), newr = int64_t(a % m);
  while (newr != 0) {
    int64_t q = r / newr;
    std::swap(t -= q * newt, newt);
    std::swap(r -= q * newr, newr);
  }
  if (r != 1) throw std::invalid_argument("invmod: not invertible");
  if (t < 0) t += int64_t(m);
  return uint64_t(t);
}

}  // namespace rdv
