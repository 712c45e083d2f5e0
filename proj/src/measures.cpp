#include "rdv/measures.hpp"

#include <algorithm>
#include <cmath>

namespace rdv {

Block make_block(uint32_t lo, uint32_t hi, std::initializer_list<uint32_t> excl) {
  return make_block(lo, hi, std::vector<uint32_t>(excl));
}

Block make_block(uint32_t lo, uint32_t hi, const std::vector<uint32_t>& excl) {
  if (lo > hi) throw std::invalid_argument("make_block: lo > hi");
  Block b;
  b.lo = lo;
  b.hi = hi;
  for (uint32_t e : excl)
    if (e >= lo && e <= hi) b.excluded.push_back(e);
  std::sort(b.excluded.begin(), b.excluded.end());
  b.excluded.erase(std::unique(b.excluded.begin(), b.excluded.end()),
                   b.excluded.end());
  if (b.excluded.size() >= size_t(hi - lo + 1))
    throw std::invalid_argument("make_block: empty block");
  return b;
}

mpz_class ProductMeasure::mass() const {
  mpz_class m = 1;
  for (const auto& b : blocks) m *= b.size();
  return m;
}

double ProductMeasure::mass_d() const {
  double m = 1;
  for (const auto& b : blocks) m *= double(b.size());
  return m;
}

void validate(const ProductMeasure& mu) {
  if (mu.g < 2) throw std::invalid_argument("ProductMeasure: base too small");
  for (const auto& b : mu.blocks) {
    if (b.hi >= mu.g || b.lo > b.hi)
      throw std::invalid_argument("ProductMeasure: block out of range");
    if (b.excluded.size() > 2)
      throw std::invalid_argument("ProductMeasure: more than 2 exclusions");
    if (b.size() == 0) throw std::invalid_argument("ProductMeasure: empty block");
    for (uint32_t e : b.excluded)
      if (e < b.lo || e > b.hi)
        throw std::invalid_argument("ProductMeasure: exclusion outside interval");
  }
}

namespace {

// sum_{t=0}^{n-1} e(-t*delta)
cplx geometric_sum(double delta, uint64_t n) {
  double d = delta - std::round(delta);
  if (std::abs(d) < 1e-14) return cplx(double(n), 0.0);
  double sd = std::sin(kPi * d);
  double sn = std::sin(kPi * double(n) * d);
  return unit_phase(-0.5 * double(n - 1) * d) * (sn / sd);
}

// e(-phase(z)) with phase(z) = ((z*m) mod den)/den + z*beta, exact in the
// rational part.
cplx point_phase(uint64_t z, uint64_t m, uint64_t den, double beta) {
  double frac = double(mulmod_u64(z % den, m, den)) / double(den);
  return unit_phase(-(frac + double(z) * beta));
}

// sum_{z in B} e(-z*(m/den + beta))
cplx block_sum(const Block& b, uint64_t m, uint64_t den, double beta) {
  double delta = double(m) / double(den) + beta;
  uint64_t n = uint64_t(b.hi) - b.lo + 1;
  cplx s = point_phase(b.lo, m, den, beta) * geometric_sum(delta, n);
  for (uint32_t e : b.excluded) s -= point_phase(e, m, den, beta);
  return s;
}

struct ThetaParts {
  uint64_t a = 0;    // numerator mod den
  uint64_t den = 1;
  double beta = 0;
};

ThetaParts normalize(const ThetaRat& theta) {
  ThetaParts p;
  p.den = theta.den;
  int64_t a = theta.num % int64_t(theta.den);
  if (a < 0) a += int64_t(theta.den);
  p.a = uint64_t(a);
  p.beta = theta.offset;
  return p;
}

}  // namespace

cplx fourier_transform(const ProductMeasure& mu, const ThetaRat& theta) {
  ThetaParts t = normalize(theta);
  cplx prod(1.0, 0.0);
  uint64_t gj = 1 % t.den;  // g^j mod den
  double betaj = t.beta - std::floor(t.beta);
  for (const auto& b : mu.blocks) {
    uint64_t mj = mulmod_u64(gj, t.a, t.den);
    prod *= block_sum(b, mj, t.den, betaj);
    gj = mulmod_u64(gj, mu.g, t.den);
    betaj = betaj * mu.g;
    betaj -= std::floor(betaj);
  }
  return prod;
}

cplx fourier_transform_direct(const ProductMeasure& mu, const ThetaRat& theta,
                              uint64_t support_cap) {
  mpz_class mass = mu.mass();
  if (mass > support_cap)
    throw resource_error("fourier_transform_direct: support too large");
  ThetaParts t = normalize(theta);
  // enumerate support values little-endian
  std::vector<uint32_t> choice(mu.blocks.size(), 0);
  std::vector<std::vector<uint32_t>> digits(mu.blocks.size());
  for (size_t j = 0; j < mu.blocks.size(); ++j) {
    const auto& b = mu.blocks[j];
    for (uint32_t d = b.lo; d <= b.hi; ++d)
      if (b.contains(d)) digits[j].push_back(d);
  }
  cplx acc(0, 0);
  std::function<void(size_t, mpz_class)> rec = [&](size_t j, mpz_class val) {
    if (j == mu.blocks.size()) {
      // exact rational phase + float offset
      mpz_class r = val % mpz_class((unsigned long)t.den);
      double frac = double(t.a) * r.get_d() / double(t.den);
      frac -= std::floor(frac);
      double off = val.get_d() * t.beta;
      acc += unit_phase(-(frac + off));
      return;
    }
    mpz_class pw;
    mpz_ui_pow_ui(pw.get_mpz_t(), mu.g, uint32_t(j));
    for (uint32_t d : digits[j]) rec(j + 1, val + d * pw);
  };
  rec(0, 0);
  return acc;
}

L1Result l1_norm(const ProductMeasure& mu, uint32_t oversampling,
                 uint64_t point_cap) {
  if (oversampling < 2) throw std::invalid_argument("l1_norm: oversampling >= 2");
  mpz_class gk;
  mpz_ui_pow_ui(gk.get_mpz_t(), mu.g, mu.k());
  mpz_class n_mpz = gk * oversampling;
  if (n_mpz > point_cap) throw resource_error("l1_norm: grid exceeds cap");
  uint64_t n = n_mpz.get_ui();

  auto eval_abs = [&](uint64_t i) {
    double theta = double(i) / double(n);
    double tau = theta;
    cplx prod(1.0, 0.0);
    for (const auto& b : mu.blocks) {
      prod *= block_sum(b, 0, 1, tau);
      tau *= mu.g;
      tau -= std::floor(tau);
    }
    return std::abs(prod);
  };

  struct Acc {
    double all = 0, even = 0;
    Acc& operator+=(const Acc& o) {
      all += o.all;
      even += o.even;
      return *this;
    }
  };
  Acc total = chunked_sum<Acc>(int64_t(n), [&](int64_t i) {
    double v = eval_abs(uint64_t(i));
    Acc a;
    a.all = v;
    if ((i & 1) == 0) a.even = v;
    return a;
  });

  L1Result r;
  r.points = n;
  r.estimate = total.all / double(n);
  uint64_t n_half = (n + 1) / 2;
  double est_half = total.even / double(n_half);
  r.refinement_delta = std::abs(r.estimate - est_half);
  return r;
}

double large_sieve_sum(const ProductMeasure& mu, uint64_t Q, uint64_t d,
                       double beta, uint64_t cap) {
  if (d < 1 || Q < d) throw std::invalid_argument("large_sieve_sum: need Q >= d >= 1");
  if (Q > cap / Q) throw resource_error("large_sieve_sum: Q^2 exceeds cap");

  std::vector<uint64_t> denoms;
  uint64_t first = ((Q + d - 1) / d) * d;
  for (uint64_t b = first; b < 2 * Q; b += d) denoms.push_back(b);

  std::vector<double> per_b(denoms.size(), 0.0);
  parallel_for_index(int64_t(denoms.size()), [&](int64_t bi) {
    uint64_t b = denoms[size_t(bi)];
    if (b == 1) return;  // no 0 < a < 1
    // g^j mod b per position
    std::vector<uint64_t> gj(mu.blocks.size());
    uint64_t w = 1 % b;
    double betaj = beta - std::floor(beta);
    std::vector<double> betas(mu.blocks.size());
    for (size_t j = 0; j < mu.blocks.size(); ++j) {
      gj[j] = w;
      betas[j] = betaj;
      w = mulmod_u64(w, mu.g, b);
      betaj *= mu.g;
      betaj -= std::floor(betaj);
    }
    double acc = 0;
    for (uint64_t a = 1; a < b; ++a) {
      if (gcd_u64(a, b) != 1) continue;
      cplx prod(1.0, 0.0);
      for (size_t j = 0; j < mu.blocks.size(); ++j)
        prod *= block_sum(mu.blocks[j], mulmod_u64(gj[j], a, b), b, betas[j]);
      acc += std::abs(prod);
    }
    per_b[size_t(bi)] = acc;
  });
  double total = 0;
  for (double v : per_b) total += v;
  return total;
}

double large_sieve_fitted_constant(const ProductMeasure& mu, uint64_t Q,
                                   uint64_t d, double value) {
  uint32_t k = mu.k();
  double lng = std::log(double(mu.g));
  double best = std::numeric_limits<double>::infinity();
  // suffix products of |B_j|
  std::vector<double> suffix(k + 1, 1.0);
  for (uint32_t j = k; j-- > 0;)
    suffix[j] = suffix[j + 1] * double(mu.blocks[j].size());
  for (uint32_t t = 0; t < k; ++t) {
    // solve value = suffix[t] * (Q^2/d * (C ln g)^t + (C g ln g)^t) for C
    auto rhs = [&](double C) {
      return suffix[t] * (double(Q) * double(Q) / double(d) *
                              std::pow(C * lng, double(t)) +
                          std::pow(C * double(mu.g) * lng, double(t)));
    };
    double lo = 0, hi = 1;
    while (rhs(hi) < value && hi < 1e12) hi *= 2;
    if (rhs(hi) < value) continue;
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi);
      (rhs(mid) >= value ? hi : lo) = mid;
    }
    best = std::min(best, hi);
  }
  return best;
}

WellConditionedReport check_well_conditioned(const ProductMeasure& mu, double C,
                                             const mpz_class& N,
                                             const WellConditionedCaps& caps) {
  if (caps.b_max > caps.hard_cap)
    throw resource_error("check_well_conditioned: b_max exceeds hard cap");
  mpz_class g2 = mpz_class(mu.g) * mu.g;
  if (N < g2) throw std::invalid_argument("check_well_conditioned: N >= g^2 required");

  WellConditionedReport rep;
  rep.C = C;
  uint32_t k = mu.k();
  uint32_t g = mu.g;

  // ln N from mpz
  signed long exp2;
  double mant = mpz_get_d_2exp(&exp2, N.get_mpz_t());
  double lnN = std::log(mant) + double(exp2) * std::log(2.0);
  double lnlnN = std::log(lnN);
  double lng = std::log(double(g));

  bool ok1 = true, ok2 = true, ok3 = true;

  // Condition 1: every interval of length ceil(C lnln N / ln g) inside
  // [k/4] has >= 99/100 indices with |B_i| >= g^{99/100}.
  {
    uint64_t L = uint64_t(std::ceil(C * lnlnN / lng));
    uint32_t quarter = k / 4;
    double thresh = std::pow(double(g), 0.99) - 1e-9;
    if (L == 0) L = 1;
    if (L > quarter) {
      rep.condition1_vacuous = true;
    } else {
      std::vector<uint32_t> big(quarter + 1, 0);
      for (uint32_t i = 0; i < quarter; ++i)
        big[i + 1] = big[i] + (double(mu.blocks[i].size()) >= thresh ? 1 : 0);
      for (uint32_t s = 0; s + L <= quarter; ++s) {
        uint32_t cnt = big[s + L] - big[s];
        if (100ull * cnt < 99ull * L) {
          ok1 = false;
          rep.failures.push_back(
              {1, "interval [" + std::to_string(s) + "," + std::to_string(s + L) +
                      ") has only " + std::to_string(cnt) + " large blocks"});
          break;
        }
      }
    }
  }

  // Condition 2: intervals missing at most 2 points (and in range).
  for (uint32_t j = 0; j < k; ++j) {
    const Block& b = mu.blocks[j];
    if (b.excluded.size() > 2 || b.hi >= g || b.size() == 0) {
      ok2 = false;
      rep.failures.push_back({2, "block " + std::to_string(j)});
      break;
    }
  }

  // Condition 3: for 1 <= a < b <= cap with (b,g)=1,
  // sum over j in [k/8,k/4] with |B_j| >= 4 of 1[||a g^j / b|| >= 1/g^2]
  // >= k / (40 ln b).
  {
    uint64_t b_limit = caps.b_max;
    double e5 = std::pow(lnlnN, 5.0);
    if (e5 < 40.0)  // exp(40) dwarfs any admissible cap
      b_limit = std::min<uint64_t>(b_limit, uint64_t(std::exp(e5)));
    rep.b_cap_applied = b_limit;
    uint32_t jlo = uint32_t(std::ceil(double(k) / 8.0));
    uint32_t jhi = uint32_t(std::floor(double(k) / 4.0));
    std::vector<uint32_t> js;
    for (uint32_t j = jlo; j <= jhi && j < k; ++j)
      if (mu.blocks[j].size() >= 4) js.push_back(j);
    for (uint64_t b = 2; b <= b_limit && ok3; ++b) {
      if (gcd_u64(b, g) != 1) continue;
      double need = double(k) / (40.0 * std::log(double(b)));
      std::vector<uint64_t> gjmod(js.size());
      for (size_t i = 0; i < js.size(); ++i)
        gjmod[i] = powmod_u64(g, js[i], b);
      for (uint64_t a = 1; a < b; ++a) {
        uint32_t cnt = 0;
        for (size_t i = 0; i < js.size(); ++i) {
          uint64_t m = mulmod_u64(gjmod[i], a, b);
          uint64_t dist = std::min(m, b - m);
          if (dist * uint64_t(g) * uint64_t(g) >= b) ++cnt;
        }
        if (double(cnt) < need) {
          ok3 = false;
          rep.failures.push_back(
              {3, "a=" + std::to_string(a) + " b=" + std::to_string(b) +
                      " count=" + std::to_string(cnt)});
          break;
        }
      }
    }
  }

  rep.passed = ok1 && ok2 && ok3;
  return rep;
}

}  // namespace rdv
