#include "fermat_lab/fermat_arith.hpp"

#include <string>
#include <vector>

#include "fermat_lab/error.hpp"

namespace fermat_lab {

namespace {

using Limb = Natural::Limb;

// Generic fold: x mod (2^m + 1) in [0, 2^m].
Natural fold(const Natural& x, std::size_t m, const Natural& modulus) {
  const std::size_t bits = x.bit_length();
  if (bits <= m) return x;
  if (bits == m + 1 && x.extract_bits(0, m).is_zero()) return x;  // exactly 2^m

  Natural even;
  Natural odd;
  bool is_odd_digit = false;
  for (std::size_t offset = 0; offset < bits; offset += m, is_odd_digit = !is_odd_digit) {
    (is_odd_digit ? odd : even) += x.extract_bits(offset, m);
  }
  Natural a = fold(even, m, modulus);
  const Natural b = fold(odd, m, modulus);
  if (a >= b) return a - b;
  a += modulus;
  return a - b;
}

// Product of two canonical residues when 2^n is a multiple of the limb size.
// The product is d2*2^(2m) + d1*2^m + d0 with d2 in {0, 1}; the residue is
// d0 - d1 + d2, corrected by a single +F_n when negative.
Natural fold_aligned_product(const Natural& product, std::size_t m) {
  const std::size_t width = m / Natural::kLimbBits;
  const auto p = product.limbs();
  auto limb_at = [&](std::size_t i) -> Limb { return i < p.size() ? p[i] : 0; };

  std::vector<Limb> r(width + 1, 0);
  Limb borrow = 0;
  for (std::size_t i = 0; i < width; ++i) {
    const Limb d0 = limb_at(i);
    const Limb d1 = limb_at(width + i);
    const Limb t = d0 - d1;
    const Limb b1 = d0 < d1;
    r[i] = t - borrow;
    borrow = b1 | (t < borrow);
  }
  // borrow set: the true value is r - 2^m; adding F_n gives r + 1. Otherwise
  // add the top digit (nonzero only for (-1)*(-1)).
  Limb carry = borrow != 0 ? 1 : limb_at(2 * width);
  for (std::size_t i = 0; carry != 0 && i <= width; ++i) {
    r[i] += carry;
    carry = r[i] == 0 ? 1 : 0;
  }
  return Natural::from_limbs(std::move(r));
}

}  // namespace

FermatIndex::FermatIndex(unsigned n, unsigned max_index) : n_(n) {
  if (n > max_index) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "Fermat index " + std::to_string(n) + " exceeds the configured maximum " + std::to_string(max_index));
  }
}

FermatResidue::FermatResidue(const Natural& value, FermatIndex n) : n_(n), value_(reduce_fold(value, n).value_) {}

bool FermatResidue::is_minus_one() const {
  return value_.bit_length() == n_.modulus_bits() + 1 && value_ == Natural::power_of_two(n_.modulus_bits());
}

Natural fermat_value(FermatIndex n) { return Natural::power_of_two(n.modulus_bits()) + Natural(1); }

FermatResidue reduce_fold(const Natural& x, FermatIndex n) {
  const std::size_t m = n.modulus_bits();
  if (x.bit_length() <= m) return FermatResidue(FermatResidue::Canonical{}, x, n);
  return FermatResidue(FermatResidue::Canonical{}, fold(x, m, fermat_value(n)), n);
}

FermatResidue mod_mul(const FermatResidue& a, const FermatResidue& b) {
  if (!(a.n_ == b.n_)) {
    throw Error(ErrorCode::kModulusMismatch, "residues modulo F_" + std::to_string(a.n_.value()) + " and F_" +
                                                 std::to_string(b.n_.value()) + " cannot be multiplied");
  }
  const std::size_t m = a.n_.modulus_bits();
  Natural product = a.value_ * b.value_;
  if (m % Natural::kLimbBits == 0) {
    return FermatResidue(FermatResidue::Canonical{}, fold_aligned_product(product, m), a.n_);
  }
  return reduce_fold(product, a.n_);
}

FermatResidue mod_square(const FermatResidue& a) { return mod_mul(a, a); }

FermatResidue mod_square_chain(const FermatResidue& a, std::uint64_t count, const SquaringObserver& observer) {
  FermatResidue x = a;
  for (std::uint64_t i = 1; i <= count; ++i) {
    x = mod_square(x);
    if (observer) observer(i, x);
  }
  return x;
}

FermatResidue mod_pow_general(const FermatResidue& a, const Natural& e) {
  FermatResidue result(Natural(1), a.index());
  for (std::size_t i = e.bit_length(); i-- > 0;) {
    result = mod_square(result);
    if (e.bit(i)) result = mod_mul(result, a);
  }
  return result;
}

}  // namespace fermat_lab
