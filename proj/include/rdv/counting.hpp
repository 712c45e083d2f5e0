#pragma once

// Exact carry-state dynamic programming over base-g digits: counts of
// x_1 + ... + x_m = T with all summands in S_b, decomposition of the
// conditional distribution into product measures, exactly-uniform sampling,
// and the stochastic-domination experiment.
//
// Carries live in [0, m-1]: a sum of m digits plus an incoming carry is
// below m*g. Counts are exact big integers (with a transparent 64-bit fast
// path when a proven bound fits).

#include <array>
#include <memory>
#include <optional>

#include "rdv/digits.hpp"
#include "rdv/measures.hpp"

namespace rdv {

struct RepCountQuery {
  mpz_class target;
  int m = 3;  // number of summands, 2 or 3
  DigitSystem sys;
  bool include_zero = false;  // summands from {0} u S_b instead of S_b
  bool coprime_to_g = false;  // gcd(x_i, g) = 1, via the least digit
  // Optional per-position extra forbidden digits, applied to the padded
  // digit string of every summand. Entry j applies to position j.
  std::vector<std::vector<uint32_t>> extra_forbidden;

  RepCountQuery(mpz_class T, int m_, DigitSystem s, bool zero = false,
                bool coprime = false)
      : target(std::move(T)), m(m_), sys(s), include_zero(zero),
        coprime_to_g(coprime) {}
};

// n_m(s) = #{(d_1..d_m) in D^m : sum d_i = s}, s in [0, m(g-1)].
std::vector<uint64_t> digit_tuple_counts(int m, const std::vector<uint32_t>& allowed,
                                         uint32_t g);

// Reusable DP for a fixed (sys, m, flags); count() may be called for many T.
class RepCounter {
 public:
  explicit RepCounter(const RepCountQuery& prototype);
  mpz_class count(const mpz_class& T) const;
  int m() const { return m_; }
  const DigitSystem& sys() const { return sys_; }

 private:
  friend class RepSampler;
  struct Tables;
  DigitSystem sys_;
  int m_;
  bool include_zero_, coprime_, b_zero_;
  std::shared_ptr<const Tables> tables_;
};

mpz_class count_representations(const RepCountQuery& q);

struct SensitivityResult {
  double ratio = 1.0;  // max over j1,j2 of count(T-j1)/count(T-j2); inf if a
                       // denominator vanishes
  bool finite = true;
  std::array<mpz_class, 4> counts;
  int j_max = 0, j_min = 0;
};

// m = 3, positive members of S_b. Requires T >= g^2.
SensitivityResult sensitivity_ratio(const mpz_class& T, const DigitSystem& sys);

// ---------------------------------------------------------------------------
// Carry decomposition (m = 2, summands from {0} u S_b).
// ---------------------------------------------------------------------------

struct DecompositionEntry {
  std::vector<uint8_t> carries;  // c_1..c_k (c_0 = 0); c_k equals T div g^k
  ProductMeasure measure;        // conditional digit distribution of x_1
};

struct CarryDecomposition {
  mpz_class target;
  std::vector<DecompositionEntry> entries;
  mpz_class total_mass() const;
};

// Entries enumerate carry sequences (for b = 0, also the canonical lengths of
// the two summands, which the product structure cannot otherwise express);
// digits at positions >= reveal_above are fully revealed, giving singleton
// blocks there. Total mass equals count_representations(T, m=2, include_zero).
CarryDecomposition decompose_conditional(const mpz_class& T, const DigitSystem& sys,
                                         uint32_t reveal_above,
                                         uint64_t entry_cap = 1'000'000);

// The unique entry of the decomposition whose support contains (x1, x2).
DecompositionEntry decomposition_entry_for(const mpz_class& x1, const mpz_class& x2,
                                           const DigitSystem& sys,
                                           uint32_t reveal_above);

// ---------------------------------------------------------------------------
// Exactly uniform sampling over representations.
// ---------------------------------------------------------------------------

class RepSampler {
 public:
  explicit RepSampler(const RepCountQuery& q);
  const mpz_class& count() const { return total_; }
  // Deterministic given the rng state; exactly uniform over all tuples.
  std::vector<mpz_class> sample(Rng& rng) const;

 private:
  RepCountQuery q_;
  RepCounter counter_;
  mpz_class total_;
  std::vector<uint32_t> tdigits_;
  int high_ = 0;
  // suffix[j] maps joint state -> completions of positions >= j
  std::vector<std::vector<mpz_class>> suffix_;
};

std::vector<mpz_class> sample_representation(const RepCountQuery& q, uint64_t seed);

// Chernoff-Hoeffding upper tail exp(-n*KL(p'||p)); p' = 1 handled as p^n.
double chernoff_bound(uint64_t n, double p, double p_prime);

struct DominationResult {
  std::vector<double> empirical_tail;  // index t: P[sum Y_j >= t]
  std::vector<double> bound_tail;      // Poisson-binomial tail at fitted_C
  double fitted_C = 1.0;
  uint64_t trials = 0;
};

// S[j] is the set of digit pairs (x1_j, x2_j) counted at position j; the
// experiment samples uniform representations of T = x1+x2+x3 (m = 3) and
// fits the smallest C >= 1 whose Bin(min(C|S_j|/g^2, 1)) tail dominates the
// empirical tail within 3-sigma Monte-Carlo bands.
DominationResult domination_experiment(
    const mpz_class& T, const DigitSystem& sys,
    const std::vector<std::vector<std::pair<uint32_t, uint32_t>>>& S,
    uint64_t trials, uint64_t seed);

}  // namespace rdv
