#include "rdv/digits.hpp"

namespace rdv {

DigitSystem DigitSystem::for_target(const mpz_class& N, uint32_t g, uint32_t b) {
  if (N < 1) throw std::invalid_argument("for_target: N >= 1 required");
  uint32_t k = 1;
  mpz_class pw = g;
  while (pw <= N) {
    pw *= g;
    ++k;
  }
  return DigitSystem(g, b, k);
}

mpz_class DigitSystem::modulus() const {
  mpz_class m;
  mpz_ui_pow_ui(m.get_mpz_t(), g, k);
  return m;
}

DigitVector to_digits(const mpz_class& n, const DigitSystem& sys) {
  if (n < 0 || n >= sys.modulus())
    throw std::out_of_range("to_digits: n outside [0, g^k)");
  DigitVector dv(sys.k, 0);
  mpz_class v = n;
  for (uint32_t j = 0; j < sys.k && v != 0; ++j) {
    dv[j] = uint32_t(mpz_fdiv_q_ui(v.get_mpz_t(), v.get_mpz_t(), sys.g));
  }
  return dv;
}

mpz_class from_digits(const DigitVector& dv, const DigitSystem& sys) {
  if (dv.size() > sys.k) throw std::out_of_range("from_digits: too many digits");
  mpz_class v = 0;
  for (size_t j = dv.size(); j-- > 0;) {
    if (dv[j] >= sys.g) throw std::out_of_range("from_digits: digit out of range");
    v *= sys.g;
    v += dv[j];
  }
  return v;
}

DigitVector to_digits_unbounded(const mpz_class& n, uint32_t g) {
  if (n < 0) throw std::invalid_argument("to_digits_unbounded: n >= 0 required");
  DigitVector dv;
  mpz_class v = n;
  do {
    dv.push_back(uint32_t(mpz_fdiv_q_ui(v.get_mpz_t(), v.get_mpz_t(), g)));
  } while (v != 0);
  return dv;
}

bool is_restricted(const mpz_class& n, const DigitSystem& sys) {
  if (n < 1) return false;
  mpz_class v = n;
  while (v != 0) {
    if (uint32_t(mpz_fdiv_q_ui(v.get_mpz_t(), v.get_mpz_t(), sys.g)) == sys.b)
      return false;
  }
  return true;
}

bool is_restricted_u64(uint64_t n, uint32_t g, uint32_t b) {
  if (n < 1) return false;
  while (n != 0) {
    if (n % g == b) return false;
    n /= g;
  }
  return true;
}

std::vector<uint64_t> enumerate_restricted(uint64_t limit, const DigitSystem& sys) {
  mpz_class cap = sys.modulus();
  if (cap.fits_ulong_p() && limit > cap.get_ui())
    throw std::out_of_range("enumerate_restricted: limit exceeds g^k");
  std::vector<uint64_t> out;
  // Counter over digit strings, skipping the forbidden digit per position.
  std::vector<uint32_t> d;  // little-endian, canonical (no leading zeros)
  auto value = [&]() {
    uint64_t v = 0;
    for (size_t j = d.size(); j-- > 0;) v = v * sys.g + d[j];
    return v;
  };
  auto next_allowed = [&](uint32_t x) -> uint32_t {
    // smallest allowed digit >= x, or g meaning overflow
    if (x == sys.b) ++x;
    return x;
  };
  // start at 1
  d = {next_allowed(1)};
  if (d[0] >= sys.g) d = {};  // cannot happen for g >= 3
  while (!d.empty()) {
    uint64_t v = value();
    if (v >= limit) break;
    out.push_back(v);
    // increment
    size_t j = 0;
    for (;;) {
      if (j == d.size()) {
        uint32_t lead = next_allowed(1);
        d.push_back(lead);
        break;
      }
      uint32_t nx = next_allowed(d[j] + 1);
      if (nx < sys.g) {
        d[j] = nx;
        break;
      }
      d[j] = next_allowed(0);  // reset; 0 may be forbidden (b == 0)
      if (d[j] >= sys.g) throw std::logic_error("enumerate_restricted: bad reset");
      ++j;
    }
  }
  return out;
}

}  // namespace rdv
