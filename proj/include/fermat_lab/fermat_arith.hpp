#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

#include "fermat_lab/natural.hpp"

namespace fermat_lab {

inline constexpr unsigned kDefaultMaxIndex = 24;

/// Index n of the Fermat number F_n = 2^(2^n) + 1, checked against a
/// configurable guard.
class FermatIndex {
 public:
  /// Throws kIndexOutOfRange when n > max_index.
  explicit FermatIndex(unsigned n, unsigned max_index = kDefaultMaxIndex);

  unsigned value() const noexcept { return n_; }
  /// Bit width m = 2^n of the modulus' power-of-two part.
  std::size_t modulus_bits() const noexcept { return std::size_t{1} << n_; }

  friend bool operator==(FermatIndex lhs, FermatIndex rhs) noexcept { return lhs.n_ == rhs.n_; }

 private:
  unsigned n_;
};

/// Residue modulo F_n held in the inclusive range [0, 2^(2^n)]; the top
/// value 2^(2^n) is the representative of -1.
class FermatResidue {
 public:
  /// Reduces an arbitrary value into canonical form.
  FermatResidue(const Natural& value, FermatIndex n);

  FermatIndex index() const noexcept { return n_; }
  const Natural& value() const noexcept { return value_; }

  bool is_zero() const noexcept { return value_.is_zero(); }
  bool is_one() const noexcept { return value_.is_one(); }
  bool is_minus_one() const;

  friend bool operator==(const FermatResidue&, const FermatResidue&) = default;

 private:
  struct Canonical {};
  FermatResidue(Canonical, Natural value, FermatIndex n) : n_(n), value_(std::move(value)) {}

  friend FermatResidue reduce_fold(const Natural& x, FermatIndex n);
  friend FermatResidue mod_mul(const FermatResidue& a, const FermatResidue& b);

  FermatIndex n_;
  Natural value_;
};

/// Returns 2^(2^n) + 1.
Natural fermat_value(FermatIndex n);

/// x mod F_n by alternating-sign recombination of base-2^(2^n) digits.
FermatResidue reduce_fold(const Natural& x, FermatIndex n);

/// Throws kModulusMismatch when the operands belong to different F_n.
FermatResidue mod_mul(const FermatResidue& a, const FermatResidue& b);
FermatResidue mod_square(const FermatResidue& a);

/// Invoked after every squaring with the 1-based squaring index.
using SquaringObserver = std::function<void(std::uint64_t index, const FermatResidue& residue)>;

/// a^(2^count) mod F_n by `count` successive squarings.
FermatResidue mod_square_chain(const FermatResidue& a, std::uint64_t count,
                               const SquaringObserver& observer = {});

/// a^e mod F_n, left-to-right square-and-multiply.
FermatResidue mod_pow_general(const FermatResidue& a, const Natural& e);

}  // namespace fermat_lab
