#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fermat_lab {

/**
 * Arbitrary-precision nonnegative integer.
 *
 * Magnitude is stored as 64-bit limbs, least significant first, with no
 * leading zero limb (zero is the empty limb vector). Every operation returns
 * a canonical value. Subtraction that would go negative throws.
 */
class Natural {
 public:
  using Limb = std::uint64_t;
  static constexpr std::size_t kLimbBits = 64;

  Natural() = default;
  explicit Natural(std::uint64_t value);

  static Natural from_limbs(std::vector<Limb> limbs);
  /// Parses lowercase or uppercase hex without prefix. Throws on empty input
  /// or a non-hex character.
  static Natural from_hex(std::string_view hex);
  static Natural from_decimal(std::string_view dec);
  static Natural power_of_two(std::size_t exponent);

  std::string to_hex() const;
  std::string to_decimal() const;

  bool is_zero() const noexcept { return limbs_.empty(); }
  bool is_odd() const noexcept { return !limbs_.empty() && (limbs_[0] & 1u); }
  bool is_one() const noexcept { return limbs_.size() == 1 && limbs_[0] == 1; }
  std::size_t bit_length() const noexcept;
  bool bit(std::size_t index) const noexcept;
  std::size_t limb_count() const noexcept { return limbs_.size(); }
  std::span<const Limb> limbs() const noexcept { return limbs_; }
  std::optional<std::uint64_t> to_u64() const noexcept;

  /// Bits [offset, offset + width) as a new value.
  Natural extract_bits(std::size_t offset, std::size_t width) const;

  std::uint64_t mod_u64(std::uint64_t divisor) const;

  Natural& operator+=(const Natural& rhs);
  Natural& operator-=(const Natural& rhs);
  Natural& operator*=(const Natural& rhs);
  Natural& operator<<=(std::size_t shift);
  Natural& operator>>=(std::size_t shift);

  friend Natural operator+(Natural lhs, const Natural& rhs) { return lhs += rhs; }
  friend Natural operator-(Natural lhs, const Natural& rhs) { return lhs -= rhs; }
  friend Natural operator*(const Natural& lhs, const Natural& rhs);
  friend Natural operator<<(Natural lhs, std::size_t shift) { return lhs <<= shift; }
  friend Natural operator>>(Natural lhs, std::size_t shift) { return lhs >>= shift; }
  friend Natural operator/(const Natural& lhs, const Natural& rhs);
  friend Natural operator%(const Natural& lhs, const Natural& rhs);

  /// Quotient and remainder; throws on a zero divisor.
  static std::pair<Natural, Natural> divmod(const Natural& dividend, const Natural& divisor);

  friend bool operator==(const Natural&, const Natural&) = default;
  friend std::strong_ordering operator<=>(const Natural& lhs, const Natural& rhs);

 private:
  void trim() noexcept;

  std::vector<Limb> limbs_;
};

Natural gcd(Natural a, Natural b);

/// Limb count at which multiplication switches from schoolbook to Karatsuba.
/// Process-wide; read on every multiplication.
std::size_t karatsuba_threshold() noexcept;
void set_karatsuba_threshold(std::size_t limbs) noexcept;

inline constexpr std::size_t kDefaultKaratsubaThreshold = 32;

}  // namespace fermat_lab
