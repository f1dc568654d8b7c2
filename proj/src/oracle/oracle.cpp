#include "fermat_lab/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "fermat_lab/error.hpp"

namespace fermat_lab::oracle {

namespace {

using Digit = std::uint32_t;
using Digits = std::vector<Digit>;  // little-endian base 2^32, no leading zeros

void trim(Digits& x) {
  while (!x.empty() && x.back() == 0) x.pop_back();
}

Digits to_digits(const Natural& x) {
  Digits d;
  for (const auto limb : x.limbs()) {
    d.push_back(static_cast<Digit>(limb));
    d.push_back(static_cast<Digit>(limb >> 32));
  }
  trim(d);
  return d;
}

Natural from_digits(const Digits& d) {
  std::vector<Natural::Limb> limbs((d.size() + 1) / 2, 0);
  for (std::size_t i = 0; i < d.size(); ++i) limbs[i / 2] |= static_cast<Natural::Limb>(d[i]) << (32 * (i % 2));
  return Natural::from_limbs(std::move(limbs));
}

int compare(const Digits& a, const Digits& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (std::size_t i = a.size(); i-- > 0;) {
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  }
  return 0;
}

// a -= b, a >= b
void subtract(Digits& a, const Digits& b) {
  std::int64_t borrow = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::int64_t t = static_cast<std::int64_t>(a[i]) - borrow - (i < b.size() ? b[i] : 0);
    borrow = t < 0 ? 1 : 0;
    if (t < 0) t += std::int64_t{1} << 32;
    a[i] = static_cast<Digit>(t);
  }
  trim(a);
}

// a = 2a + bit
void shift_in(Digits& a, bool bit) {
  Digit carry = bit ? 1 : 0;
  for (auto& d : a) {
    const Digit next = d >> 31;
    d = (d << 1) | carry;
    carry = next;
  }
  if (carry) a.push_back(carry);
}

bool bit_at(const Digits& a, std::size_t i) { return (a[i / 32] >> (i % 32)) & 1u; }

Digits mod_digits(const Digits& x, const Digits& m) {
  Digits r;
  for (std::size_t i = x.size() * 32; i-- > 0;) {
    shift_in(r, bit_at(x, i));
    if (compare(r, m) >= 0) subtract(r, m);
  }
  return r;
}

Digits multiply(const Digits& a, const Digits& b) {
  if (a.empty() || b.empty()) return {};
  Digits out(a.size() + b.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::uint64_t carry = 0;
    for (std::size_t j = 0; j < b.size(); ++j) {
      const std::uint64_t t = static_cast<std::uint64_t>(a[i]) * b[j] + out[i + j] + carry;
      out[i + j] = static_cast<Digit>(t);
      carry = t >> 32;
    }
    out[i + b.size()] = static_cast<Digit>(carry);
  }
  trim(out);
  return out;
}

bool is_one(const Digits& d) { return d.size() == 1 && d[0] == 1; }

Digits gcd_digits(Digits a, Digits b) {
  while (!b.empty()) {
    Digits r = mod_digits(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

std::uint64_t mul_mod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t pow_mod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  a %= m;
  while (e != 0) {
    if (e & 1u) result = mul_mod_u64(result, a, m);
    a = mul_mod_u64(a, a, m);
    e >>= 1;
  }
  return result;
}

std::uint64_t mod_small(const Digits& x, std::uint64_t d) {
  unsigned __int128 r = 0;
  for (std::size_t i = x.size(); i-- > 0;) r = ((r << 32) | x[i]) % d;
  return static_cast<std::uint64_t>(r);
}

}  // namespace

OracleReport make_report(std::string operation, std::vector<Natural> inputs, const Natural& expected,
                         const Natural& actual) {
  OracleReport report;
  report.operation = std::move(operation);
  for (const auto& x : inputs) report.inputs.push_back(x.to_hex());
  report.expected = expected.to_hex();
  report.actual = actual.to_hex();
  report.match = report.expected == report.actual;
  return report;
}

Natural fermat_number(unsigned n) {
  const std::size_t top = std::size_t{1} << n;
  Digits d(top / 32 + 1, 0);
  d[top / 32] |= Digit{1} << (top % 32);
  d[0] |= 1;
  return from_digits(d);
}

Natural naive_mod(const Natural& x, const Natural& m) {
  if (m.is_zero()) throw Error(ErrorCode::kZeroModulus, "oracle: zero modulus");
  return from_digits(mod_digits(to_digits(x), to_digits(m)));
}

Natural naive_mul_mod(const Natural& a, const Natural& b, const Natural& m) {
  if (m.is_zero()) throw Error(ErrorCode::kZeroModulus, "oracle: zero modulus");
  return from_digits(mod_digits(multiply(to_digits(a), to_digits(b)), to_digits(m)));
}

Natural naive_pow_mod(const Natural& a, const Natural& e, const Natural& m) {
  if (m.is_zero()) throw Error(ErrorCode::kZeroModulus, "oracle: zero modulus");
  const Digits md = to_digits(m);
  Digits base = mod_digits(to_digits(a), md);
  Digits result = mod_digits(Digits{1}, md);
  const Digits ed = to_digits(e);
  for (std::size_t i = 0; i < ed.size() * 32; ++i) {
    if (bit_at(ed, i)) result = mod_digits(multiply(result, base), md);
    base = mod_digits(multiply(base, base), md);
  }
  return from_digits(result);
}

std::optional<std::uint64_t> naive_order(const Natural& a, const Natural& m, std::uint64_t limit) {
  if (m.is_zero()) throw Error(ErrorCode::kZeroModulus, "oracle: zero modulus");
  const Digits md = to_digits(m);
  const Digits ad = mod_digits(to_digits(a), md);
  if (!is_one(gcd_digits(md, ad)) && !(is_one(md))) {
    throw Error(ErrorCode::kBaseNotCoprime, "oracle: base " + a.to_hex() + " is not coprime to " + m.to_hex());
  }
  Digits x = ad;
  for (std::uint64_t e = 1; e <= limit; ++e) {
    if (is_one(x) || is_one(md)) return e;
    x = mod_digits(multiply(x, ad), md);
  }
  return std::nullopt;
}

std::optional<std::uint64_t> trial_division(const Natural& m, std::uint64_t bound) {
  const Digits md = to_digits(m);
  const auto fits = [&](std::uint64_t d) {
    // d*d <= m
    const unsigned __int128 sq = static_cast<unsigned __int128>(d) * d;
    if (md.size() > 4) return true;
    unsigned __int128 mv = 0;
    for (std::size_t i = md.size(); i-- > 0;) mv = (mv << 32) | md[i];
    return sq <= mv;
  };
  for (std::uint64_t d = 2; d <= bound && fits(d); d += (d == 2 ? 1 : 2)) {
    if (mod_small(md, d) == 0) return d;
  }
  return std::nullopt;
}

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  unsigned s = 0;
  while ((d & 1u) == 0) {
    d >>= 1;
    ++s;
  }
  // These witnesses are deterministic for every n < 2^64.
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = pow_mod_u64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      x = mul_mod_u64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::uint64_t isqrt_u64(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && static_cast<unsigned __int128>(r) * r > n) --r;
  while (static_cast<unsigned __int128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

}  // namespace fermat_lab::oracle
