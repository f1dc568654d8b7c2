#include "fermat_lab/natural.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <stdexcept>

#include "fermat_lab/error.hpp"

namespace fermat_lab {

namespace {

using Limb = Natural::Limb;
using u128 = unsigned __int128;
using LimbVec = std::vector<Limb>;

std::atomic<std::size_t> g_karatsuba_threshold{kDefaultKaratsubaThreshold};

std::span<const Limb> trimmed(std::span<const Limb> x) {
  std::size_t n = x.size();
  while (n > 0 && x[n - 1] == 0) --n;
  return x.first(n);
}

// out must be zeroed and hold a.size() + b.size() limbs.
void schoolbook(std::span<const Limb> a, std::span<const Limb> b, std::span<Limb> out) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    const u128 ai = a[i];
    Limb carry = 0;
    for (std::size_t j = 0; j < b.size(); ++j) {
      const u128 t = ai * b[j] + out[i + j] + carry;
      out[i + j] = static_cast<Limb>(t);
      carry = static_cast<Limb>(t >> 64);
    }
    out[i + b.size()] = carry;
  }
}

// out += src << (64 * offset). The caller guarantees the sum fits.
void add_at(std::span<Limb> out, std::size_t offset, std::span<const Limb> src) {
  src = trimmed(src);
  Limb carry = 0;
  std::size_t i = 0;
  for (; i < src.size(); ++i) {
    const u128 t = static_cast<u128>(out[offset + i]) + src[i] + carry;
    out[offset + i] = static_cast<Limb>(t);
    carry = static_cast<Limb>(t >> 64);
  }
  for (std::size_t k = offset + i; carry != 0 && k < out.size(); ++k) {
    out[k] += 1;
    carry = out[k] == 0 ? 1 : 0;
  }
}

// x -= y, requires x >= y.
void sub_in_place(std::span<Limb> x, std::span<const Limb> y) {
  y = trimmed(y);
  Limb borrow = 0;
  std::size_t i = 0;
  for (; i < y.size(); ++i) {
    const Limb xi = x[i];
    const Limb t = xi - y[i];
    const Limb b1 = xi < y[i];
    x[i] = t - borrow;
    borrow = b1 | (t < borrow);
  }
  for (; borrow != 0 && i < x.size(); ++i) {
    borrow = x[i] == 0 ? 1 : 0;
    x[i] -= 1;
  }
}

LimbVec add_spans(std::span<const Limb> a, std::span<const Limb> b) {
  if (a.size() < b.size()) std::swap(a, b);
  LimbVec out(a.size() + 1, 0);
  std::copy(a.begin(), a.end(), out.begin());
  add_at(out, 0, b);
  return out;
}

void mul_into(std::span<const Limb> a, std::span<const Limb> b, std::span<Limb> out) {
  if (a.size() < b.size()) std::swap(a, b);
  if (b.empty()) return;

  const std::size_t threshold = std::max<std::size_t>(4, g_karatsuba_threshold.load(std::memory_order_relaxed));
  if (b.size() < threshold) {
    schoolbook(a, b, out);
    return;
  }

  // Unbalanced operands: slice the longer one into pieces of the shorter size.
  if (2 * b.size() <= a.size()) {
    LimbVec partial;
    for (std::size_t off = 0; off < a.size(); off += b.size()) {
      const std::size_t len = std::min(b.size(), a.size() - off);
      partial.assign(len + b.size(), 0);
      mul_into(a.subspan(off, len), b, partial);
      add_at(out, off, partial);
    }
    return;
  }

  // Karatsuba: a = a1*B^h + a0, b = b1*B^h + b0.
  const std::size_t h = (a.size() + 1) / 2;
  const auto a0 = trimmed(a.first(h));
  const auto a1 = a.subspan(h);
  const auto b0 = trimmed(b.first(std::min(h, b.size())));
  const auto b1 = b.size() > h ? b.subspan(h) : std::span<const Limb>{};

  LimbVec z0(a0.size() + b0.size(), 0);
  mul_into(a0, b0, z0);
  LimbVec z2(a1.size() + b1.size(), 0);
  mul_into(a1, b1, z2);

  const LimbVec sa = add_spans(a0, a1);
  const LimbVec sb = add_spans(b0, b1);
  const auto sa_t = trimmed(sa);
  const auto sb_t = trimmed(sb);
  LimbVec z1(sa_t.size() + sb_t.size(), 0);
  mul_into(sa_t, sb_t, z1);
  sub_in_place(z1, z0);
  sub_in_place(z1, z2);

  add_at(out, 0, z0);
  add_at(out, h, z1);
  add_at(out, 2 * h, z2);
}

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::size_t karatsuba_threshold() noexcept { return g_karatsuba_threshold.load(); }

void set_karatsuba_threshold(std::size_t limbs) noexcept { g_karatsuba_threshold.store(limbs); }

Natural::Natural(std::uint64_t value) {
  if (value != 0) limbs_.push_back(value);
}

Natural Natural::from_limbs(std::vector<Limb> limbs) {
  Natural x;
  x.limbs_ = std::move(limbs);
  x.trim();
  return x;
}

Natural Natural::from_hex(std::string_view hex) {
  if (hex.empty()) throw Error(ErrorCode::kInvalidArgument, "empty hex string");
  Natural x;
  x.limbs_.assign((hex.size() + 15) / 16, 0);
  std::size_t bit = 0;
  for (auto it = hex.rbegin(); it != hex.rend(); ++it, bit += 4) {
    const int d = hex_digit(*it);
    if (d < 0) throw Error(ErrorCode::kInvalidArgument, "invalid hex digit in '" + std::string(hex) + "'");
    x.limbs_[bit / 64] |= static_cast<Limb>(d) << (bit % 64);
  }
  x.trim();
  return x;
}

Natural Natural::from_decimal(std::string_view dec) {
  if (dec.empty()) throw Error(ErrorCode::kInvalidArgument, "empty decimal string");
  Natural x;
  const Natural ten(10);
  for (char c : dec) {
    if (c < '0' || c > '9') {
      throw Error(ErrorCode::kInvalidArgument, "invalid decimal digit in '" + std::string(dec) + "'");
    }
    x *= ten;
    x += Natural(static_cast<std::uint64_t>(c - '0'));
  }
  return x;
}

Natural Natural::power_of_two(std::size_t exponent) {
  Natural x;
  x.limbs_.assign(exponent / 64 + 1, 0);
  x.limbs_.back() = Limb{1} << (exponent % 64);
  return x;
}

std::string Natural::to_hex() const {
  if (is_zero()) return "0";
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(limbs_.size() * 16);
  for (auto it = limbs_.rbegin(); it != limbs_.rend(); ++it) {
    for (int shift = 60; shift >= 0; shift -= 4) out.push_back(kDigits[(*it >> shift) & 0xf]);
  }
  const auto first = out.find_first_not_of('0');
  return out.substr(first);
}

std::string Natural::to_decimal() const {
  if (is_zero()) return "0";
  constexpr std::uint64_t kChunk = 10'000'000'000'000'000'000ull;
  std::vector<std::uint64_t> chunks;
  Natural rest = *this;
  const Natural divisor(kChunk);
  while (!rest.is_zero()) {
    auto [q, r] = divmod(rest, divisor);
    chunks.push_back(r.to_u64().value_or(0));
    rest = std::move(q);
  }
  std::string out = std::to_string(chunks.back());
  for (auto it = chunks.rbegin() + 1; it != chunks.rend(); ++it) {
    const std::string part = std::to_string(*it);
    out.append(19 - part.size(), '0');
    out += part;
  }
  return out;
}

std::size_t Natural::bit_length() const noexcept {
  if (limbs_.empty()) return 0;
  return limbs_.size() * 64 - static_cast<std::size_t>(std::countl_zero(limbs_.back()));
}

bool Natural::bit(std::size_t index) const noexcept {
  const std::size_t limb = index / 64;
  if (limb >= limbs_.size()) return false;
  return (limbs_[limb] >> (index % 64)) & 1u;
}

std::optional<std::uint64_t> Natural::to_u64() const noexcept {
  if (limbs_.size() > 1) return std::nullopt;
  return limbs_.empty() ? 0 : limbs_[0];
}

Natural Natural::extract_bits(std::size_t offset, std::size_t width) const {
  Natural x = *this >> offset;
  if (width == 0) return Natural{};
  const std::size_t full = width / 64;
  const std::size_t rem = width % 64;
  if (x.limbs_.size() > full + (rem ? 1 : 0)) x.limbs_.resize(full + (rem ? 1 : 0));
  if (rem != 0 && x.limbs_.size() == full + 1) x.limbs_[full] &= (Limb{1} << rem) - 1;
  x.trim();
  return x;
}

std::uint64_t Natural::mod_u64(std::uint64_t divisor) const {
  if (divisor == 0) throw Error(ErrorCode::kZeroModulus, "division by zero");
  u128 r = 0;
  for (auto it = limbs_.rbegin(); it != limbs_.rend(); ++it) r = ((r << 64) | *it) % divisor;
  return static_cast<std::uint64_t>(r);
}

Natural& Natural::operator+=(const Natural& rhs) {
  if (limbs_.size() < rhs.limbs_.size()) limbs_.resize(rhs.limbs_.size(), 0);
  limbs_.push_back(0);
  add_at(limbs_, 0, rhs.limbs_);
  trim();
  return *this;
}

Natural& Natural::operator-=(const Natural& rhs) {
  if (*this < rhs) throw Error(ErrorCode::kNegativeResult, "natural subtraction would be negative");
  sub_in_place(limbs_, rhs.limbs_);
  trim();
  return *this;
}

Natural operator*(const Natural& lhs, const Natural& rhs) {
  if (lhs.is_zero() || rhs.is_zero()) return Natural{};
  std::vector<Natural::Limb> out(lhs.limbs_.size() + rhs.limbs_.size(), 0);
  mul_into(lhs.limbs_, rhs.limbs_, out);
  return Natural::from_limbs(std::move(out));
}

Natural& Natural::operator*=(const Natural& rhs) { return *this = *this * rhs; }

Natural& Natural::operator<<=(std::size_t shift) {
  if (is_zero() || shift == 0) return *this;
  const std::size_t limb_shift = shift / 64;
  const unsigned bit_shift = static_cast<unsigned>(shift % 64);
  std::vector<Limb> out(limbs_.size() + limb_shift + 1, 0);
  for (std::size_t i = 0; i < limbs_.size(); ++i) {
    out[i + limb_shift] |= limbs_[i] << bit_shift;
    if (bit_shift != 0) out[i + limb_shift + 1] = limbs_[i] >> (64 - bit_shift);
  }
  limbs_ = std::move(out);
  trim();
  return *this;
}

Natural& Natural::operator>>=(std::size_t shift) {
  const std::size_t limb_shift = shift / 64;
  const unsigned bit_shift = static_cast<unsigned>(shift % 64);
  if (limb_shift >= limbs_.size()) {
    limbs_.clear();
    return *this;
  }
  std::vector<Limb> out(limbs_.size() - limb_shift, 0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = limbs_[i + limb_shift] >> bit_shift;
    if (bit_shift != 0 && i + limb_shift + 1 < limbs_.size()) {
      out[i] |= limbs_[i + limb_shift + 1] << (64 - bit_shift);
    }
  }
  limbs_ = std::move(out);
  trim();
  return *this;
}

std::pair<Natural, Natural> Natural::divmod(const Natural& dividend, const Natural& divisor) {
  if (divisor.is_zero()) throw Error(ErrorCode::kZeroModulus, "division by zero");
  if (dividend < divisor) return {Natural{}, dividend};

  if (divisor.limbs_.size() == 1) {
    const Limb d = divisor.limbs_[0];
    std::vector<Limb> q(dividend.limbs_.size(), 0);
    u128 r = 0;
    for (std::size_t i = dividend.limbs_.size(); i-- > 0;) {
      const u128 cur = (r << 64) | dividend.limbs_[i];
      q[i] = static_cast<Limb>(cur / d);
      r = cur % d;
    }
    return {from_limbs(std::move(q)), Natural(static_cast<std::uint64_t>(r))};
  }

  // Knuth, TAOCP vol. 2, algorithm 4.3.1 D with 64-bit digits.
  const unsigned s = static_cast<unsigned>(std::countl_zero(divisor.limbs_.back()));
  const Natural vn_nat = divisor << s;
  const std::vector<Limb>& vn = vn_nat.limbs_;
  std::vector<Limb> un = (dividend << s).limbs_;
  un.resize(dividend.limbs_.size() + 1, 0);

  const std::size_t n = vn.size();
  const std::size_t m = dividend.limbs_.size() - n;
  std::vector<Limb> q(m + 1, 0);
  const u128 base = static_cast<u128>(1) << 64;

  for (std::size_t j = m + 1; j-- > 0;) {
    const u128 num = (static_cast<u128>(un[j + n]) << 64) | un[j + n - 1];
    u128 qhat = num / vn[n - 1];
    u128 rhat = num % vn[n - 1];
    if (qhat >= base) {
      qhat = base - 1;
      rhat = num - qhat * vn[n - 1];
    }
    while (rhat < base && qhat * vn[n - 2] > ((rhat << 64) | un[j + n - 2])) {
      --qhat;
      rhat += vn[n - 1];
    }

    Limb borrow = 0;
    Limb carry = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const u128 p = qhat * vn[i] + carry;
      carry = static_cast<Limb>(p >> 64);
      const Limb plo = static_cast<Limb>(p);
      const Limb ui = un[i + j];
      const Limb t = ui - plo;
      const Limb b1 = ui < plo;
      un[i + j] = t - borrow;
      borrow = b1 | (t < borrow);
    }
    const Limb top = un[j + n];
    const Limb t = top - carry;
    const bool negative = (top < carry) || (t < borrow);
    un[j + n] = t - borrow;

    if (negative) {
      --qhat;
      Limb c = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const u128 sum = static_cast<u128>(un[i + j]) + vn[i] + c;
        un[i + j] = static_cast<Limb>(sum);
        c = static_cast<Limb>(sum >> 64);
      }
      un[j + n] += c;
    }
    q[j] = static_cast<Limb>(qhat);
  }

  un.resize(n);
  Natural r = from_limbs(std::move(un));
  r >>= s;
  return {from_limbs(std::move(q)), std::move(r)};
}

Natural operator/(const Natural& lhs, const Natural& rhs) { return Natural::divmod(lhs, rhs).first; }

Natural operator%(const Natural& lhs, const Natural& rhs) { return Natural::divmod(lhs, rhs).second; }

std::strong_ordering operator<=>(const Natural& lhs, const Natural& rhs) {
  if (lhs.limbs_.size() != rhs.limbs_.size()) return lhs.limbs_.size() <=> rhs.limbs_.size();
  for (std::size_t i = lhs.limbs_.size(); i-- > 0;) {
    if (lhs.limbs_[i] != rhs.limbs_[i]) return lhs.limbs_[i] <=> rhs.limbs_[i];
  }
  return std::strong_ordering::equal;
}

void Natural::trim() noexcept {
  while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
}

Natural gcd(Natural a, Natural b) {
  while (!b.is_zero()) {
    Natural r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

}  // namespace fermat_lab
