#pragma once

#include <cstdint>
#include <optional>

#include "fermat_lab/fermat_arith.hpp"
#include "fermat_lab/natural.hpp"

namespace fermat_lab {

/// Multiplicative order of a base modulo F_n, recorded as its base-2
/// logarithm alpha (ord = 2^alpha).
struct OrderResult {
  Natural base;
  FermatIndex n;
  /// nullopt marks a base whose order does not divide F_n - 1.
  std::optional<std::uint64_t> alpha;
  /// Set when F_n is composite and alpha is numeric: alpha <= 2^n - 2.
  std::optional<bool> bound_satisfied;
  bool fermat_prime = false;
  std::uint64_t squarings = 0;

  bool not_totally_even() const noexcept { return !alpha.has_value(); }
};

/// Scans alpha upward with one squaring per step, at most 2^n squarings.
/// Throws kBaseNotCoprime.
OrderResult order_alpha(FermatIndex n, const Natural& base);

/// p^(e-1) * (p - 1). Throws kEvenOrUnitModulus for even p or p = 1, and
/// kInvalidArgument when p < 2^64 is not prime or e = 0.
Natural euler_phi_prime_power(const Natural& p, unsigned e);

/// Least alpha <= max_alpha with base^(2^alpha) = 1 mod p^e, or nullopt.
/// Used with a known factorization of F_n to observe the per-prime-power
/// orders whose maximum is the modulus-level alpha.
std::optional<std::uint64_t> prime_power_order_alpha(const Natural& base, const Natural& p, unsigned e,
                                                     std::uint64_t max_alpha);

}  // namespace fermat_lab
