#include "rdv/counting.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>

namespace rdv {

std::vector<uint64_t> digit_tuple_counts(int m, const std::vector<uint32_t>& allowed,
                                         uint32_t g) {
  if (m < 0 || m > 3) throw std::invalid_argument("digit_tuple_counts: m in [0,3]");
  for (uint32_t d : allowed)
    if (d >= g) throw std::invalid_argument("digit_tuple_counts: digit out of range");
  std::vector<uint64_t> cur(1, 1);  // m = 0
  for (int i = 0; i < m; ++i) {
    std::vector<uint64_t> nxt(cur.size() + g - 1, 0);
    for (size_t s = 0; s < cur.size(); ++s)
      if (cur[s])
        for (uint32_t d : allowed) nxt[s + d] += cur[s];
    cur = std::move(nxt);
  }
  return cur;
}

namespace {

// Summand automaton states.
enum SummandState : int { kZero = 0, kPos = 1, kSuffix = 2 };

constexpr uint64_t kBinom[4][4] = {
    {1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};

struct StateSpace {
  int m;
  bool with_suffix;  // b == 0 mode
  std::vector<std::array<int, 3>> comps;  // (nZ, nP, nF)
  int comp_index[4][4][4];

  StateSpace(int m_, bool suffix) : m(m_), with_suffix(suffix) {
    std::memset(comp_index, -1, sizeof(comp_index));
    for (int z = 0; z <= m; ++z)
      for (int p = 0; p + z <= m; ++p) {
        int f = m - z - p;
        if (!with_suffix && f != 0) continue;
        comp_index[z][p][f] = int(comps.size());
        comps.push_back({z, p, f});
      }
  }
  int n_comps() const { return int(comps.size()); }
  int n_states() const { return m * n_comps(); }  // carries in [0, m)
  int state(int carry, int ci) const { return carry * n_comps() + ci; }
};

struct PosClass {
  bool zero_stay_ok = true;  // may a summand write digit 0 outside kPos?
  std::vector<uint32_t> active_digits;  // nonzero allowed digits
  std::vector<uint32_t> full_digits;    // all allowed digits (b != 0 path)
  std::vector<std::vector<uint64_t>> tup_active;  // [mu][s]
  std::vector<std::vector<uint64_t>> tup_full;    // [mu][s]
  // conv[u][p][s] = sum_{s1} tup_active[u][s1] * tup_full[p][s-s1]
  std::vector<std::vector<std::vector<uint64_t>>> conv;
};

}  // namespace

struct RepCounter::Tables {
  StateSpace space;
  std::vector<std::shared_ptr<const PosClass>> pos;  // per position j
  int init_state;
  Tables(int m, bool suffix) : space(m, suffix), init_state(0) {}
};

RepCounter::RepCounter(const RepCountQuery& q)
    : sys_(q.sys),
      m_(q.m),
      include_zero_(q.include_zero),
      coprime_(q.coprime_to_g),
      b_zero_(q.sys.b == 0) {
  if (m_ != 2 && m_ != 3) throw std::invalid_argument("RepCounter: m must be 2 or 3");
  auto t = std::make_shared<Tables>(m_, b_zero_);

  std::map<std::pair<bool, std::vector<uint32_t>>, std::shared_ptr<const PosClass>>
      cache;
  uint32_t g = sys_.g, b = sys_.b;
  for (uint32_t j = 0; j < sys_.k; ++j) {
    std::vector<uint32_t> extra;
    if (j < q.extra_forbidden.size()) {
      extra = q.extra_forbidden[j];
      std::sort(extra.begin(), extra.end());
    }
    bool coprime_here = coprime_ && j == 0;
    auto key = std::make_pair(coprime_here, extra);
    auto it = cache.find(key);
    if (it == cache.end()) {
      auto pc = std::make_shared<PosClass>();
      auto banned = [&](uint32_t d) {
        if (b_zero_ ? d >= g : (d >= g || d == b)) return true;
        return std::binary_search(extra.begin(), extra.end(), d);
      };
      bool zero_banned = banned(0) || coprime_here;  // gcd(0,g) = g > 1
      pc->zero_stay_ok = !zero_banned;
      for (uint32_t d = 1; d < g; ++d) {
        if (banned(d)) continue;
        if (coprime_here && gcd_u64(d, g) != 1) continue;
        pc->active_digits.push_back(d);
      }
      if (!b_zero_) {
        pc->full_digits = pc->active_digits;
        if (!zero_banned) pc->full_digits.insert(pc->full_digits.begin(), 0);
      }
      pc->tup_active.resize(m_ + 1);
      pc->tup_full.resize(m_ + 1);
      for (int mu = 0; mu <= m_; ++mu) {
        pc->tup_active[mu] = digit_tuple_counts(mu, pc->active_digits, g);
        if (!b_zero_) pc->tup_full[mu] = digit_tuple_counts(mu, pc->full_digits, g);
      }
      if (!b_zero_) {
        pc->conv.assign(m_ + 1, {});
        for (int u = 0; u <= m_; ++u) {
          pc->conv[u].resize(m_ + 1 - u);
          for (int p = 0; p + u <= m_; ++p) {
            std::vector<uint64_t> c(size_t((u + p) * (g - 1) + 1), 0);
            const auto& a = pc->tup_active[u];
            const auto& f = pc->tup_full[p];
            for (size_t s1 = 0; s1 < a.size(); ++s1)
              if (a[s1])
                for (size_t s2 = 0; s2 < f.size(); ++s2)
                  if (f[s2]) c[s1 + s2] += a[s1] * f[s2];
            pc->conv[u][p] = std::move(c);
          }
        }
      }
      it = cache.emplace(key, pc).first;
    }
    t->pos.push_back(it->second);
  }
  t->init_state = t->space.state(0, t->space.comp_index[m_][0][0]);
  tables_ = t;
}

namespace {

inline void accumulate(uint64_t& dst, const uint64_t& src, uint64_t mult) {
  dst += src * mult;
}
inline void accumulate(mpz_class& dst, const mpz_class& src, uint64_t mult) {
  mpz_addmul_ui(dst.get_mpz_t(), src.get_mpz_t(),
                static_cast<unsigned long>(mult));
}

// One DP pass. Digits are little-endian and padded to k; `high` = T div g^k.
template <class C>
C run_dp(const StateSpace& sp,
         const std::vector<std::shared_ptr<const PosClass>>& pos, uint32_t g,
         bool b_zero, bool include_zero, const std::vector<uint32_t>& td,
         int high, int m) {
  int ns = sp.n_states();
  std::vector<C> cur(static_cast<size_t>(ns));
  std::vector<C> nxt(static_cast<size_t>(ns));
  cur[size_t(sp.state(0, sp.comp_index[m][0][0]))] = 1;

  int smax = m * int(g - 1);
  for (size_t j = 0; j < pos.size(); ++j) {
    const PosClass& pc = *pos[j];
    // For b = 0, a member's canonical digits are all nonzero, so a summand
    // must leave the all-zero state at position 0 or never.
    int u_max_zero_state = (!b_zero || j == 0) ? m : 0;
    std::fill(nxt.begin(), nxt.end(), C(0));
    for (int ci = 0; ci < sp.n_comps(); ++ci) {
      auto [nZ, nP, nF] = sp.comps[size_t(ci)];
      for (int c = 0; c < m; ++c) {
        const C& val = cur[size_t(sp.state(c, ci))];
        if (val == 0) continue;
        for (int c2 = 0; c2 < m; ++c2) {
          int s = int(td[j]) + int(g) * c2 - c;
          if (s < 0 || s > smax) continue;
          if (b_zero) {
            for (int u = 0; u <= std::min(nZ, u_max_zero_state); ++u)
              for (int v = 0; v <= nP; ++v) {
                int zero_writers = (nZ - u) + v + nF;
                if (zero_writers > 0 && !pc.zero_stay_ok) continue;
                int mu = u + nP - v;
                const auto& ta = pc.tup_active[size_t(mu)];
                if (size_t(s) >= ta.size() || ta[size_t(s)] == 0) continue;
                uint64_t mult = kBinom[nZ][u] * kBinom[nP][v] * ta[size_t(s)];
                int ci2 = sp.comp_index[nZ - u][nP + u - v][nF + v];
                accumulate(nxt[size_t(sp.state(c2, ci2))], val, mult);
              }
          } else {
            for (int u = 0; u <= nZ; ++u) {
              if (nZ - u > 0 && !pc.zero_stay_ok) continue;
              const auto& cv = pc.conv[size_t(u)][size_t(nP)];
              if (size_t(s) >= cv.size() || cv[size_t(s)] == 0) continue;
              uint64_t mult = kBinom[nZ][u] * cv[size_t(s)];
              int ci2 = sp.comp_index[nZ - u][nP + u][0];
              accumulate(nxt[size_t(sp.state(c2, ci2))], val, mult);
            }
          }
        }
      }
    }
    cur.swap(nxt);
  }

  C total(0);
  if (high >= 0 && high < m) {
    for (int ci = 0; ci < sp.n_comps(); ++ci) {
      auto [nZ, nP, nF] = sp.comps[size_t(ci)];
      if (nZ > 0 && !include_zero) continue;
      total += cur[size_t(sp.state(high, ci))];
    }
  }
  return total;
}

}  // namespace

mpz_class RepCounter::count(const mpz_class& T) const {
  if (T < 0) throw std::invalid_argument("count: T >= 0 required");
  mpz_class lim = sys_.modulus() * m_;
  if (T >= lim) throw std::invalid_argument("count: T >= m*g^k");

  std::vector<uint32_t> td(sys_.k);
  mpz_class v = T;
  for (uint32_t j = 0; j < sys_.k; ++j)
    td[j] = uint32_t(mpz_fdiv_q_ui(v.get_mpz_t(), v.get_mpz_t(), sys_.g));
  int high = int(v.get_ui());

  // 64-bit path when every DP cell provably fits: cells count prefix tuples,
  // bounded by g^{k(m-1)}.
  double bits = double(sys_.k) * (m_ - 1) * std::log2(double(sys_.g));
  if (bits < 62.0) {
    uint64_t r = run_dp<uint64_t>(tables_->space, tables_->pos, sys_.g, b_zero_,
                                  include_zero_, td, high, m_);
    return mpz_class(r);
  }
  return run_dp<mpz_class>(tables_->space, tables_->pos, sys_.g, b_zero_,
                           include_zero_, td, high, m_);
}

mpz_class count_representations(const RepCountQuery& q) {
  return RepCounter(q).count(q.target);
}

SensitivityResult sensitivity_ratio(const mpz_class& T, const DigitSystem& sys) {
  if (T < mpz_class(sys.g) * sys.g)
    throw std::invalid_argument("sensitivity_ratio: T >= g^2 required");
  RepCountQuery proto(T, 3, sys);
  RepCounter counter(proto);
  SensitivityResult r;
  for (int j = 0; j < 4; ++j) r.counts[size_t(j)] = counter.count(T - j);
  int jmax = 0, jmin = 0;
  for (int j = 1; j < 4; ++j) {
    if (r.counts[size_t(j)] > r.counts[size_t(jmax)]) jmax = j;
    if (r.counts[size_t(j)] < r.counts[size_t(jmin)]) jmin = j;
  }
  r.j_max = jmax;
  r.j_min = jmin;
  if (r.counts[size_t(jmin)] == 0) {
    r.finite = false;
    r.ratio = std::numeric_limits<double>::infinity();
  } else {
    mpq_class q(r.counts[size_t(jmax)], r.counts[size_t(jmin)]);
    q.canonicalize();
    r.ratio = q.get_d();
  }
  return r;
}

// ---------------------------------------------------------------------------
// Carry decomposition
// ---------------------------------------------------------------------------

mpz_class CarryDecomposition::total_mass() const {
  mpz_class m = 0;
  for (const auto& e : entries) m += e.measure.mass();
  return m;
}

namespace {

// Append, splitting blocks at positions >= reveal_above into singletons.
void push_revealed(CarryDecomposition& out, DecompositionEntry base,
                   uint32_t reveal_above, uint64_t entry_cap) {
  uint32_t k = base.measure.k();
  std::vector<uint32_t> idx;  // positions needing reveal
  for (uint32_t j = reveal_above; j < k; ++j)
    if (base.measure.blocks[j].size() > 1) idx.push_back(j);
  std::vector<std::vector<uint32_t>> choices(idx.size());
  for (size_t i = 0; i < idx.size(); ++i) {
    const Block& b = base.measure.blocks[idx[i]];
    for (uint32_t d = b.lo; d <= b.hi; ++d)
      if (b.contains(d)) choices[i].push_back(d);
  }
  std::vector<size_t> pick(idx.size(), 0);
  for (;;) {
    DecompositionEntry e = base;
    for (size_t i = 0; i < idx.size(); ++i) {
      uint32_t d = choices[i][pick[i]];
      e.measure.blocks[idx[i]] = make_block(d, d);
    }
    out.entries.push_back(std::move(e));
    if (out.entries.size() > entry_cap)
      throw resource_error("decompose_conditional: entry cap exceeded");
    size_t i = 0;
    while (i < idx.size() && ++pick[i] == choices[i].size()) pick[i++] = 0;
    if (i == idx.size()) break;
  }
}

// Block of x1-digits at a position with pair-digit-sum s, both digits
// avoiding b (b != 0 path): interval minus {b, s-b}.
std::optional<Block> pair_block(uint32_t g, uint32_t b, int s) {
  int lo = std::max(0, s - int(g - 1));
  int hi = std::min(int(g - 1), s);
  if (lo > hi) return std::nullopt;
  std::vector<uint32_t> ex;
  auto exclude = [&](int e) {
    if (e >= lo && e <= hi &&
        std::find(ex.begin(), ex.end(), uint32_t(e)) == ex.end())
      ex.push_back(uint32_t(e));
  };
  exclude(int(b));
  exclude(s - int(b));
  if (hi - lo + 1 - int(ex.size()) <= 0) return std::nullopt;
  return make_block(uint32_t(lo), uint32_t(hi), ex);
}

}  // namespace

CarryDecomposition decompose_conditional(const mpz_class& T, const DigitSystem& sys,
                                         uint32_t reveal_above, uint64_t entry_cap) {
  mpz_class lim = sys.modulus() * 2;
  if (T < 0 || T >= lim)
    throw std::out_of_range("decompose_conditional: T outside [0, 2 g^k)");
  if (sys.k > 24)
    throw resource_error("decompose_conditional: k too large for enumeration");
  uint32_t k = sys.k, g = sys.g, b = sys.b;
  std::vector<uint32_t> td(k);
  mpz_class v = T;
  for (uint32_t j = 0; j < k; ++j)
    td[j] = uint32_t(mpz_fdiv_q_ui(v.get_mpz_t(), v.get_mpz_t(), g));
  int high = int(v.get_ui());  // in {0, 1}

  CarryDecomposition out;
  out.target = T;

  // DFS over carry sequences; for b = 0 also over the canonical lengths
  // (L1, L2) of the two summands, since "no zero digit below the top" is not
  // a per-position product constraint.
  std::vector<uint8_t> carries(k, 0);
  std::vector<Block> blocks(k);

  std::function<void(uint32_t, int)> dfs = [&](uint32_t j, int c) {
    if (j == k) {
      if (c != high) return;
      DecompositionEntry e;
      e.carries = carries;
      e.measure.g = g;
      e.measure.blocks = blocks;
      push_revealed(out, std::move(e), reveal_above, entry_cap);
      return;
    }
    for (int c2 = 0; c2 <= 1; ++c2) {
      int s = int(td[j]) + int(g) * c2 - c;
      if (s < 0 || s > 2 * int(g - 1)) continue;
      auto blk = pair_block(g, b, s);
      if (!blk) continue;
      carries[j] = uint8_t(c2);
      blocks[j] = *blk;
      dfs(j + 1, c2);
    }
  };

  std::function<void(uint32_t, int, uint32_t, uint32_t)> dfs0 =
      [&](uint32_t j, int c, uint32_t L1, uint32_t L2) {
        if (j == k) {
          if (c != high) return;
          DecompositionEntry e;
          e.carries = carries;
          e.measure.g = g;
          e.measure.blocks = blocks;
          push_revealed(out, std::move(e), reveal_above, entry_cap);
          return;
        }
        for (int c2 = 0; c2 <= 1; ++c2) {
          int s = int(td[j]) + int(g) * c2 - c;
          if (s < 0 || s > 2 * int(g - 1)) continue;
          std::optional<Block> blk;
          if (j < L1 && j < L2) {
            // both summands still in their nonzero prefixes
            auto cand = pair_block(g, 0, s);  // excludes digits 0 and s
            if (cand) blk = cand;
          } else if (j >= L1 && j < L2) {
            // x1 finished; its digit is 0, x2's digit is s in [1, g-1]
            if (s >= 1 && s <= int(g - 1)) blk = make_block(0, 0);
          } else if (j >= L2 && j < L1) {
            if (s >= 1 && s <= int(g - 1)) blk = make_block(uint32_t(s), uint32_t(s));
          } else {
            if (s == 0) blk = make_block(0, 0);
          }
          if (!blk) continue;
          carries[j] = uint8_t(c2);
          blocks[j] = *blk;
          dfs0(j + 1, c2, L1, L2);
        }
      };

  if (b != 0) {
    dfs(0, 0);
  } else {
    for (uint32_t L1 = 0; L1 <= k; ++L1)
      for (uint32_t L2 = 0; L2 <= k; ++L2) dfs0(0, 0, L1, L2);
  }
  return out;
}

DecompositionEntry decomposition_entry_for(const mpz_class& x1, const mpz_class& x2,
                                           const DigitSystem& sys,
                                           uint32_t reveal_above) {
  uint32_t k = sys.k, g = sys.g, b = sys.b;
  DigitVector d1 = to_digits(x1, sys), d2 = to_digits(x2, sys);
  DecompositionEntry e;
  e.carries.resize(k);
  e.measure.g = g;
  e.measure.blocks.resize(k);
  uint32_t L1 = 0, L2 = 0;
  for (uint32_t j = 0; j < k; ++j) {
    if (d1[j] != 0) L1 = j + 1;
    if (d2[j] != 0) L2 = j + 1;
  }
  int c = 0;
  for (uint32_t j = 0; j < k; ++j) {
    int sum = int(d1[j]) + int(d2[j]) + c;
    int c2 = sum / int(g);
    int s = int(d1[j]) + int(d2[j]);  // pair digit sum revealed: t_j + g c2 - c
    e.carries[j] = uint8_t(c2);
    std::optional<Block> blk;
    if (b != 0) {
      blk = pair_block(g, b, s);
    } else {
      if (j < L1 && j < L2)
        blk = pair_block(g, 0, s);
      else if (j >= L1 && j < L2)
        blk = make_block(0, 0);
      else if (j >= L2 && j < L1)
        blk = make_block(uint32_t(s), uint32_t(s));
      else
        blk = make_block(0, 0);
    }
    if (!blk) throw std::logic_error("decomposition_entry_for: invalid pair");
    e.measure.blocks[j] = *blk;
    if (j >= reveal_above) e.measure.blocks[j] = make_block(d1[j], d1[j]);
    c = c2;
  }
  return e;
}

// ---------------------------------------------------------------------------
// Sampler
// ---------------------------------------------------------------------------

RepSampler::RepSampler(const RepCountQuery& q) : q_(q), counter_(q) {
  if (q.target < 0 || q.target >= q.sys.modulus() * q.m)
    throw std::invalid_argument("RepSampler: T out of range");
  const auto& t = *counter_.tables_;
  const StateSpace& sp = t.space;
  uint32_t k = q.sys.k, g = q.sys.g;

  tdigits_.resize(k);
  mpz_class v = q.target;
  for (uint32_t j = 0; j < k; ++j)
    tdigits_[j] = uint32_t(mpz_fdiv_q_ui(v.get_mpz_t(), v.get_mpz_t(), g));
  high_ = int(v.get_ui());

  int ns = sp.n_states(), m = q.m;
  suffix_.assign(k + 1, std::vector<mpz_class>(size_t(ns), mpz_class(0)));
  for (int ci = 0; ci < sp.n_comps(); ++ci) {
    auto [nZ, nP, nF] = sp.comps[size_t(ci)];
    if (nZ > 0 && !q.include_zero) continue;
    if (high_ >= 0 && high_ < m) suffix_[k][size_t(sp.state(high_, ci))] = 1;
  }
  int smax = m * int(g - 1);
  for (uint32_t j = k; j-- > 0;) {
    const PosClass& pc = *t.pos[j];
    int u_max_zero_state = (!counter_.b_zero_ || j == 0) ? m : 0;
    for (int ci = 0; ci < sp.n_comps(); ++ci) {
      auto [nZ, nP, nF] = sp.comps[size_t(ci)];
      for (int c = 0; c < m; ++c) {
        mpz_class acc = 0;
        for (int c2 = 0; c2 < m; ++c2) {
          int s = int(tdigits_[j]) + int(g) * c2 - c;
          if (s < 0 || s > smax) continue;
          if (counter_.b_zero_) {
            for (int u = 0; u <= std::min(nZ, u_max_zero_state); ++u)
              for (int vv = 0; vv <= nP; ++vv) {
                int zero_writers = (nZ - u) + vv + nF;
                if (zero_writers > 0 && !pc.zero_stay_ok) continue;
                int mu = u + nP - vv;
                const auto& ta = pc.tup_active[size_t(mu)];
                if (size_t(s) >= ta.size() || ta[size_t(s)] == 0) continue;
                uint64_t mult = kBinom[nZ][u] * kBinom[nP][vv] * ta[size_t(s)];
                int ci2 = sp.comp_index[nZ - u][nP + u - vv][nF + vv];
                mpz_addmul_ui(acc.get_mpz_t(),
                              suffix_[j + 1][size_t(sp.state(c2, ci2))].get_mpz_t(),
                              static_cast<unsigned long>(mult));
              }
          } else {
            for (int u = 0; u <= nZ; ++u) {
              if (nZ - u > 0 && !pc.zero_stay_ok) continue;
              const auto& cv = pc.conv[size_t(u)][size_t(nP)];
              if (size_t(s) >= cv.size() || cv[size_t(s)] == 0) continue;
              uint64_t mult = kBinom[nZ][u] * cv[size_t(s)];
              int ci2 = sp.comp_index[nZ - u][nP + u][0];
              mpz_addmul_ui(acc.get_mpz_t(),
                            suffix_[j + 1][size_t(sp.state(c2, ci2))].get_mpz_t(),
                            static_cast<unsigned long>(mult));
            }
          }
        }
        suffix_[j][size_t(sp.state(c, ci))] = acc;
      }
    }
  }
  total_ = suffix_[0][size_t(sp.state(0, sp.comp_index[m][0][0]))];
}

std::vector<mpz_class> RepSampler::sample(Rng& rng) const {
  if (total_ == 0) throw std::domain_error("RepSampler: empty support");
  const auto& t = *counter_.tables_;
  const StateSpace& sp = t.space;
  int m = q_.m;
  uint32_t g = q_.sys.g, k = q_.sys.k;
  bool b0 = counter_.b_zero_;

  std::vector<int> sum_state(size_t(m), kZero);
  std::vector<DigitVector> digits(size_t(m), DigitVector(k, 0));

  int c = 0;
  int nZ = m, nP = 0, nF = 0;
  for (uint32_t j = 0; j < k; ++j) {
    const PosClass& pc = *t.pos[j];
    int u_max_zero_state = (!b0 || j == 0) ? m : 0;
    const mpz_class& here =
        suffix_[j][size_t(sp.state(c, sp.comp_index[nZ][nP][nF]))];
    mpz_class r = rng.below(here);
    // walk candidates in deterministic order
    int sel_c2 = -1, sel_u = -1, sel_v = -1, sel_s = -1;
    for (int c2 = 0; c2 < m && sel_c2 < 0; ++c2) {
      int s = int(tdigits_[j]) + int(g) * c2 - c;
      if (s < 0 || s > m * int(g - 1)) continue;
      if (b0) {
        for (int u = 0; u <= std::min(nZ, u_max_zero_state) && sel_c2 < 0; ++u)
          for (int vv = 0; vv <= nP; ++vv) {
            int zero_writers = (nZ - u) + vv + nF;
            if (zero_writers > 0 && !pc.zero_stay_ok) continue;
            int mu = u + nP - vv;
            const auto& ta = pc.tup_active[size_t(mu)];
            if (size_t(s) >= ta.size() || ta[size_t(s)] == 0) continue;
            uint64_t mult = kBinom[nZ][u] * kBinom[nP][vv] * ta[size_t(s)];
            int ci2 = sp.comp_index[nZ - u][nP + u - vv][nF + vv];
            mpz_class w = suffix_[j + 1][size_t(sp.state(c2, ci2))] * mult;
            if (r < w) {
              sel_c2 = c2;
              sel_u = u;
              sel_v = vv;
              sel_s = s;
              break;
            }
            r -= w;
          }
      } else {
        for (int u = 0; u <= nZ; ++u) {
          if (nZ - u > 0 && !pc.zero_stay_ok) continue;
          const auto& cv = pc.conv[size_t(u)][size_t(nP)];
          if (size_t(s) >= cv.size() || cv[size_t(s)] == 0) continue;
          uint64_t mult = kBinom[nZ][u] * cv[size_t(s)];
          int ci2 = sp.comp_index[nZ - u][nP + u][0];
          mpz_class w = suffix_[j + 1][size_t(sp.state(c2, ci2))] * mult;
          if (r < w) {
            sel_c2 = c2;
            sel_u = u;
            sel_v = 0;
            sel_s = s;
            break;
          }
          r -= w;
        }
      }
    }
    if (sel_c2 < 0) throw std::logic_error("RepSampler: walk failed");

    // choose which summands activate / finish
    std::vector<int> zlist, plist;
    for (int i = 0; i < m; ++i) {
      if (sum_state[size_t(i)] == kZero) zlist.push_back(i);
      if (sum_state[size_t(i)] == kPos) plist.push_back(i);
    }
    auto pick_subset = [&](std::vector<int>& lst, int cnt) {
      for (int i = 0; i < cnt; ++i) {
        size_t swap_i = size_t(i) + size_t(rng.below(uint64_t(lst.size() - size_t(i))));
        std::swap(lst[size_t(i)], lst[swap_i]);
      }
      lst.resize(size_t(cnt));
    };
    std::vector<int> activators = zlist;
    pick_subset(activators, sel_u);
    std::vector<int> finishers;
    if (b0) {
      finishers = plist;
      pick_subset(finishers, sel_v);
    }

    // assign digits
    int s_rem = sel_s;
    if (b0) {
      // actives: activators + P-stayers, all from the active alphabet
      std::vector<int> actives = activators;
      for (int i : plist)
        if (std::find(finishers.begin(), finishers.end(), i) == finishers.end())
          actives.push_back(i);
      int mu = int(actives.size());
      for (int idx = 0; idx < mu; ++idx) {
        const auto& tab = pc.tup_active[size_t(mu - idx - 1)];
        uint64_t tot = pc.tup_active[size_t(mu - idx)][size_t(s_rem)];
        uint64_t rr = rng.below(tot);
        uint32_t chosen = 0;
        bool ok = false;
        for (uint32_t d : pc.active_digits) {
          if (int(d) > s_rem) break;
          size_t s2 = size_t(s_rem - int(d));
          uint64_t w = s2 < tab.size() ? tab[s2] : 0;
          if (rr < w) {
            chosen = d;
            ok = true;
            break;
          }
          rr -= w;
        }
        if (!ok) throw std::logic_error("RepSampler: digit walk failed");
        digits[size_t(actives[size_t(idx)])][j] = chosen;
        s_rem -= int(chosen);
      }
    } else {
      // activators from the nonzero alphabet, then P-summands from the full one
      int u_rem = sel_u, p_rem = nP;
      for (int i : activators) {
        uint64_t tot = pc.conv[size_t(u_rem)][size_t(p_rem)][size_t(s_rem)];
        uint64_t rr = rng.below(tot);
        const auto& nxt = pc.conv[size_t(u_rem - 1)][size_t(p_rem)];
        uint32_t chosen = 0;
        bool ok = false;
        for (uint32_t d : pc.active_digits) {
          if (int(d) > s_rem) break;
          size_t s2 = size_t(s_rem - int(d));
          uint64_t w = s2 < nxt.size() ? nxt[s2] : 0;
          if (rr < w) {
            chosen = d;
            ok = true;
            break;
          }
          rr -= w;
        }
        if (!ok) throw std::logic_error("RepSampler: digit walk failed");
        digits[size_t(i)][j] = chosen;
        s_rem -= int(chosen);
        --u_rem;
      }
      for (int i : plist) {
        uint64_t tot = pc.conv[0][size_t(p_rem)][size_t(s_rem)];
        uint64_t rr = rng.below(tot);
        const auto& nxt = pc.conv[0][size_t(p_rem - 1)];
        uint32_t chosen = 0;
        bool ok = false;
        for (uint32_t d : pc.full_digits) {
          if (int(d) > s_rem) break;
          size_t s2 = size_t(s_rem - int(d));
          uint64_t w = s2 < nxt.size() ? nxt[s2] : 0;
          if (rr < w) {
            chosen = d;
            ok = true;
            break;
          }
          rr -= w;
        }
        if (!ok) throw std::logic_error("RepSampler: digit walk failed");
        digits[size_t(i)][j] = chosen;
        s_rem -= int(chosen);
        --p_rem;
      }
    }
    if (s_rem != 0) throw std::logic_error("RepSampler: digit sum mismatch");

    // state updates
    for (int i : activators) sum_state[size_t(i)] = kPos;
    for (int i : finishers) sum_state[size_t(i)] = kSuffix;
    nZ -= sel_u;
    nP += sel_u - sel_v;
    nF += sel_v;
    c = sel_c2;
  }

  std::vector<mpz_class> out;
  for (int i = 0; i < m; ++i) out.push_back(from_digits(digits[size_t(i)], q_.sys));
  return out;
}

std::vector<mpz_class> sample_representation(const RepCountQuery& q, uint64_t seed) {
  RepSampler s(q);
  Rng rng(seed);
  return s.sample(rng);
}

double chernoff_bound(uint64_t n, double p, double p_prime) {
  if (!(p > 0.0) || p > p_prime || p_prime > 1.0)
    throw std::invalid_argument("chernoff_bound: need 0 < p <= p' <= 1");
  if (p_prime == p) return 1.0;
  if (p_prime == 1.0) return std::exp(-double(n) * std::log(1.0 / p));
  double kl = p_prime * std::log(p_prime / p) +
              (1.0 - p_prime) * std::log((1.0 - p_prime) / (1.0 - p));
  return std::exp(-double(n) * kl);
}

DominationResult domination_experiment(
    const mpz_class& T, const DigitSystem& sys,
    const std::vector<std::vector<std::pair<uint32_t, uint32_t>>>& S,
    uint64_t trials, uint64_t seed) {
  mpz_class g2 = mpz_class(sys.g) * sys.g;
  if (T < g2) throw std::invalid_argument("domination_experiment: T >= g^2 required");

  RepCountQuery q(T, 3, sys);
  RepSampler sampler(q);

  size_t npos = S.size();
  std::vector<std::vector<uint8_t>> member(npos,
                                           std::vector<uint8_t>(sys.g * sys.g, 0));
  std::vector<double> probs_unit(npos, 0.0);  // |S_j| / g^2
  for (size_t j = 0; j < npos; ++j) {
    for (auto [a, b] : S[j]) {
      if (a >= sys.g || b >= sys.g)
        throw std::invalid_argument("domination_experiment: pair out of range");
      member[j][a * sys.g + b] = 1;
    }
    uint64_t cnt = 0;
    for (uint8_t m : member[j]) cnt += m;
    probs_unit[j] = double(cnt) / double(sys.g) / double(sys.g);
  }

  std::vector<uint32_t> ysum(trials, 0);
  parallel_for_index(int64_t(trials), [&](int64_t ti) {
    Rng rng(derive_seed(seed, uint64_t(ti)));
    auto xs = sampler.sample(rng);
    DigitVector d1 = to_digits(xs[0], sys), d2 = to_digits(xs[1], sys);
    uint32_t y = 0;
    for (size_t j = 0; j < npos && j < d1.size(); ++j)
      if (member[j][d1[j] * sys.g + d2[j]]) ++y;
    ysum[size_t(ti)] = y;
  });

  DominationResult res;
  res.trials = trials;
  size_t tmax = npos + 1;
  res.empirical_tail.assign(tmax + 1, 0.0);
  for (uint32_t y : ysum)
    for (size_t t = 0; t <= std::min<size_t>(y, tmax); ++t)
      res.empirical_tail[t] += 1.0;
  for (auto& v : res.empirical_tail) v /= double(trials);

  auto pb_tail = [&](double C) {
    // Poisson-binomial distribution of sum of Ber(min(C p_unit_j, 1))
    std::vector<double> dist(1, 1.0);
    for (size_t j = 0; j < npos; ++j) {
      double pj = std::min(1.0, C * probs_unit[j]);
      std::vector<double> nd(dist.size() + 1, 0.0);
      for (size_t i = 0; i < dist.size(); ++i) {
        nd[i] += dist[i] * (1 - pj);
        nd[i + 1] += dist[i] * pj;
      }
      dist = std::move(nd);
    }
    std::vector<double> tail(tmax + 1, 0.0);
    double acc = 0;
    for (size_t t = tmax + 1; t-- > 0;) {
      if (t < dist.size()) acc += dist[t];
      tail[t] = std::min(1.0, acc);
    }
    return tail;
  };

  auto dominates = [&](double C) {
    auto tail = pb_tail(C);
    for (size_t t = 0; t <= tmax; ++t) {
      double e = res.empirical_tail[t];
      double band = 3.0 * std::sqrt(std::max(e * (1 - e), 0.0) / double(trials)) +
                    3.0 / double(trials);
      if (tail[t] + 1e-12 < e - band) return false;
    }
    return true;
  };

  double lo = 1.0, hi = 1.0;
  if (!dominates(1.0)) {
    while (hi < double(sys.g) * sys.g * 4 && !dominates(hi)) hi *= 2;
    lo = hi / 2;
    for (int it = 0; it < 60; ++it) {
      double mid = 0.5 * (lo + hi);
      (dominates(mid) ? hi : lo) = mid;
    }
  }
  res.fitted_C = hi;
  res.bound_tail = pb_tail(hi);
  return res;
}

}  // namespace rdv
