#include "fermat_lab/order.hpp"

#include <cassert>

#include "fermat_lab/error.hpp"
#include "fermat_lab/oracle.hpp"
#include "fermat_lab/primality.hpp"

namespace fermat_lab {

namespace {

bool fermat_number_is_prime(FermatIndex n) {
  if (n.value() < 2) return oracle::is_prime_u64(fermat_value(n).to_u64().value());
  return pepin_test(n, Natural(3)).pepin_prime;
}

}  // namespace

OrderResult order_alpha(FermatIndex n, const Natural& base) {
  require_coprime(n, base);

  OrderResult result{base, n, std::nullopt, std::nullopt, fermat_number_is_prime(n), 0};
  const std::uint64_t limit = n.modulus_bits();

  FermatResidue x = reduce_fold(base, n);
  FermatResidue previous = x;
  for (std::uint64_t alpha = 0; alpha <= limit; ++alpha) {
    if (x.is_one()) {
      // Minimality witness: the previous residue was not 1.
      assert(alpha == 0 || !previous.is_one());
      result.alpha = alpha;
      break;
    }
    if (alpha == limit) break;
    previous = x;
    x = mod_square(x);
    ++result.squarings;
  }

  if (result.alpha && !result.fermat_prime) result.bound_satisfied = *result.alpha + 2 <= limit;
  return result;
}

Natural euler_phi_prime_power(const Natural& p, unsigned e) {
  if (!p.is_odd() || p.is_one()) {
    throw Error(ErrorCode::kEvenOrUnitModulus, "euler_phi_prime_power needs an odd prime, got 0x" + p.to_hex());
  }
  if (e == 0) throw Error(ErrorCode::kInvalidArgument, "prime power exponent must be positive");
  if (const auto small = p.to_u64(); small && !oracle::is_prime_u64(*small)) {
    throw Error(ErrorCode::kInvalidArgument, p.to_decimal() + " is not prime");
  }
  Natural result = p - Natural(1);
  for (unsigned i = 1; i < e; ++i) result *= p;
  return result;
}

std::optional<std::uint64_t> prime_power_order_alpha(const Natural& base, const Natural& p, unsigned e,
                                                     std::uint64_t max_alpha) {
  Natural modulus = p;
  for (unsigned i = 1; i < e; ++i) modulus *= p;
  Natural x = base % modulus;
  if (!gcd(modulus, x).is_one()) {
    throw Error(ErrorCode::kBaseNotCoprime, "base 0x" + base.to_hex() + " is not coprime to 0x" + modulus.to_hex());
  }
  for (std::uint64_t alpha = 0; alpha <= max_alpha; ++alpha) {
    if (x.is_one()) return alpha;
    x = (x * x) % modulus;
  }
  return std::nullopt;
}

}  // namespace fermat_lab
