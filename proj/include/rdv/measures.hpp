#pragma once

// Product measures over digit positions: sums of unit Dirac masses on
// integers whose j-th base-g digit lies in a block B_j (an interval with a
// few excluded digits). Fourier transform in the e(-x*Theta) convention,
// L^1 quadrature, large-sieve sums over reduced fractions, and the
// well-conditioned checks.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rdv/util.hpp"

namespace rdv {

struct Block {
  uint32_t lo = 0, hi = 0;           // inclusive
  std::vector<uint32_t> excluded;    // sorted, within [lo, hi]

  uint32_t size() const { return hi - lo + 1 - uint32_t(excluded.size()); }
  bool contains(uint32_t d) const {
    if (d < lo || d > hi) return false;
    for (uint32_t e : excluded)
      if (e == d) return false;
    return true;
  }
};

// Interval [lo, hi] minus up to two digits; drops out-of-range exclusions and
// deduplicates.
Block make_block(uint32_t lo, uint32_t hi, std::initializer_list<uint32_t> excl = {});
Block make_block(uint32_t lo, uint32_t hi, const std::vector<uint32_t>& excl);

struct ProductMeasure {
  uint32_t g = 10;
  std::vector<Block> blocks;  // length k, little-endian positions

  uint32_t k() const { return uint32_t(blocks.size()); }
  mpz_class mass() const;
  double mass_d() const;
};

// Throws std::invalid_argument if any block is empty, out of range, or has
// more than two exclusions (the type invariant).
void validate(const ProductMeasure& mu);

// Theta = num/den + offset; fractions are kept exact so that g^j * a/b never
// goes through a lossy float reduction.
struct ThetaRat {
  int64_t num = 0;
  uint64_t den = 1;
  double offset = 0.0;

  static ThetaRat rational(int64_t a, uint64_t b, double beta = 0.0) {
    if (b == 0) throw std::invalid_argument("ThetaRat: zero denominator");
    return {a, b, beta};
  }
  static ThetaRat real(double x) { return {0, 1, x}; }
};

// mu-hat(Theta) = prod_j sum_{z in B_j} e(-z g^j Theta), computed per block.
cplx fourier_transform(const ProductMeasure& mu, const ThetaRat& theta);

// Direct summation over the support; test oracle (support must be small).
cplx fourier_transform_direct(const ProductMeasure& mu, const ThetaRat& theta,
                              uint64_t support_cap = 5'000'000);

inline constexpr uint64_t kDefaultL1PointCap = 400'000'000;

struct L1Result {
  double estimate = 0;
  double refinement_delta = 0;
  uint64_t points = 0;
};

// Riemann estimate of the integral of |mu-hat| over oversampling * g^k
// uniform points; refinement_delta compares against half resolution.
L1Result l1_norm(const ProductMeasure& mu, uint32_t oversampling,
                 uint64_t point_cap = kDefaultL1PointCap);

inline constexpr uint64_t kDefaultSieveCap = 400'000'000;

// Sum over b in [Q, 2Q) with d | b and reduced fractions 0 < a < b of
// |mu-hat(a/b + beta)|.
double large_sieve_sum(const ProductMeasure& mu, uint64_t Q, uint64_t d,
                       double beta, uint64_t cap = kDefaultSieveCap);

// Smallest C such that value <= prod_{t<=j<k}|B_j| * (Q^2/d (C ln g)^t +
// (C g ln g)^t) for some t; reported alongside sieve sums.
double large_sieve_fitted_constant(const ProductMeasure& mu, uint64_t Q,
                                   uint64_t d, double value);

struct WellConditionedCaps {
  uint64_t b_max = 2000;        // range cap on condition-3 denominators
  uint64_t hard_cap = 1000000;  // resource cap; b_max above this throws
};

struct WellConditionedFailure {
  int condition = 0;  // 1, 2 or 3
  std::string witness;
};

struct WellConditionedReport {
  double C = 0;
  bool passed = false;
  std::vector<WellConditionedFailure> failures;  // first witness per condition
  uint64_t b_cap_applied = 0;
  bool condition1_vacuous = false;  // interval longer than [k/4]
};

// Checks the three conditions verbatim (natural log for "log b"); the b-range
// of condition 3 is min(exp((lnln N)^5), caps.b_max) and is recorded.
WellConditionedReport check_well_conditioned(const ProductMeasure& mu, double C,
                                             const mpz_class& N,
                                             const WellConditionedCaps& caps = {});

}  // namespace rdv
