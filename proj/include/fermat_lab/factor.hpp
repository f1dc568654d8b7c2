#pragma once

#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

#include "fermat_lab/fermat_arith.hpp"
#include "fermat_lab/natural.hpp"

namespace fermat_lab {

enum class Primality { kPrime, kComposite, kUnverified };

std::string_view to_string(Primality p);

/// Candidate p = k * 2^(n+2) + 1 for a divisor of F_n.
struct CandidateDivisor {
  FermatIndex n;
  std::uint64_t k;
  Natural p;
  bool divides = false;
  bool k_is_one_or_power_of_two = false;
  Primality primality = Primality::kUnverified;
};

/// Fills in p and the shape of k only; divides and primality are left unset.
CandidateDivisor make_candidate(FermatIndex n, std::uint64_t k);

/// Whether p | F_n, via 2^(2^n) = -1 mod p with n squarings mod p.
/// Throws kEvenOrUnitModulus for even p or p <= 1.
bool divides_fermat(const Natural& p, FermatIndex n);

struct LucasSearchOptions {
  std::uint64_t k_max = 0;
  /// Skip candidates that a small-prime sieve or the 64-bit primality test
  /// rejects. Every prime divisor is still found; composite divisors are not.
  bool prime_filter = false;
  unsigned threads = 1;
  /// Receives every tested candidate with 2^(2^n) mod p. May be called
  /// concurrently when threads > 1.
  std::function<void(std::uint64_t k, const Natural& p, const Natural& residue)> on_candidate;
};

/// Proper divisors 1 < p < F_n of Lucas form with k in [1, k_max], ascending
/// by k. Requires n >= 2.
std::vector<CandidateDivisor> lucas_search(FermatIndex n, const LucasSearchOptions& options);

/// Structural constraint on a divisor of a composite F_n: k > 1 and k is not
/// a power of two. Throws kCalledOnNondivisor when d.divides is false.
bool validate_lucas_multiplier(const CandidateDivisor& d);

}  // namespace fermat_lab
