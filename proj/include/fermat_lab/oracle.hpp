#pragma once

// Brute-force reference implementations. Nothing here calls into the
// Fermat-specialized arithmetic: values enter as Natural and are immediately
// converted to a private 32-bit digit representation with its own
// multiplication and division loops.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fermat_lab/natural.hpp"

namespace fermat_lab::oracle {

struct OracleReport {
  std::string operation;
  std::vector<std::string> inputs;  // hex
  std::string expected;             // hex
  std::string actual;               // hex
  bool match = false;
};

OracleReport make_report(std::string operation, std::vector<Natural> inputs, const Natural& expected,
                         const Natural& actual);

/// 2^(2^n) + 1 built by bit placement.
Natural fermat_number(unsigned n);

/// Remainder by bitwise restoring long division. Throws kZeroModulus.
Natural naive_mod(const Natural& x, const Natural& m);

/// a * b mod m with schoolbook digit multiplication.
Natural naive_mul_mod(const Natural& a, const Natural& b, const Natural& m);

/// a^e mod m, right-to-left binary exponentiation on top of naive_mul_mod.
Natural naive_pow_mod(const Natural& a, const Natural& e, const Natural& m);

/// Smallest e in [1, limit] with a^e = 1 mod m, by iterated multiplication.
/// Throws kBaseNotCoprime when gcd(a, m) != 1.
std::optional<std::uint64_t> naive_order(const Natural& a, const Natural& m, std::uint64_t limit);

/// Smallest factor d of m with 2 <= d <= min(bound, isqrt(m)); nullopt when
/// none exists (m prime if bound >= isqrt(m)).
std::optional<std::uint64_t> trial_division(const Natural& m, std::uint64_t bound);

/// Deterministic Miller-Rabin for 64-bit inputs.
bool is_prime_u64(std::uint64_t n);

std::uint64_t isqrt_u64(std::uint64_t n);

}  // namespace fermat_lab::oracle
