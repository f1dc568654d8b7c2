#include "fermat_lab/factor.hpp"

#include <algorithm>
#include <bit>
#include <mutex>
#include <string>
#include <thread>

#include "fermat_lab/error.hpp"
#include "fermat_lab/oracle.hpp"
#include "fermat_lab/primality.hpp"

namespace fermat_lab {

namespace {

constexpr std::uint64_t kSievePrimes[] = {3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41, 43,
                                          47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

// 2^(2^n) mod p.
Natural power_tower_residue(const Natural& p, FermatIndex n) {
  if (const auto small = p.to_u64()) {
    std::uint64_t x = 2 % *small;
    for (unsigned i = 0; i < n.value(); ++i) x = mul_mod(x, x, *small);
    return Natural(x);
  }
  Natural x(2);
  for (unsigned i = 0; i < n.value(); ++i) x = (x * x) % p;
  return x;
}

bool sieve_rejects(const Natural& p) {
  for (const std::uint64_t q : kSievePrimes) {
    if (p.mod_u64(q) == 0 && p != Natural(q)) return true;
  }
  if (const auto small = p.to_u64()) return !oracle::is_prime_u64(*small);
  return false;
}

Primality primality_of(const Natural& p) {
  if (const auto small = p.to_u64()) return oracle::is_prime_u64(*small) ? Primality::kPrime : Primality::kComposite;
  return Primality::kUnverified;
}

// Exclusive upper bound on k so that p < F_n, or nullopt when every 64-bit k
// qualifies.
std::optional<std::uint64_t> proper_divisor_k_bound(FermatIndex n) {
  const std::size_t exponent = n.modulus_bits() - n.value() - 2;
  if (exponent >= 64) return std::nullopt;
  return std::uint64_t{1} << exponent;
}

void search_range(FermatIndex n, std::uint64_t first, std::uint64_t last, const LucasSearchOptions& options,
                  std::vector<CandidateDivisor>& found) {
  for (std::uint64_t k = first; k <= last; ++k) {
    CandidateDivisor c = make_candidate(n, k);
    if (options.prime_filter && sieve_rejects(c.p)) continue;
    const Natural residue = power_tower_residue(c.p, n);
    if (options.on_candidate) options.on_candidate(k, c.p, residue);
    if (residue + Natural(1) != c.p) continue;
    c.divides = true;
    c.primality = primality_of(c.p);
    found.push_back(std::move(c));
  }
}

}  // namespace

std::string_view to_string(Primality p) {
  switch (p) {
    case Primality::kPrime: return "prime";
    case Primality::kComposite: return "composite";
    case Primality::kUnverified: return "unverified";
  }
  return "unverified";
}

CandidateDivisor make_candidate(FermatIndex n, std::uint64_t k) {
  CandidateDivisor c{n, k, (Natural(k) << (n.value() + 2)) + Natural(1)};
  c.k_is_one_or_power_of_two = std::has_single_bit(k);
  return c;
}

bool divides_fermat(const Natural& p, FermatIndex n) {
  if (!p.is_odd() || p.is_one()) {
    throw Error(ErrorCode::kEvenOrUnitModulus, "divisor candidate must be odd and greater than 1, got 0x" + p.to_hex());
  }
  return power_tower_residue(p, n) + Natural(1) == p;
}

std::vector<CandidateDivisor> lucas_search(FermatIndex n, const LucasSearchOptions& options) {
  require_index_at_least_two(n);
  std::uint64_t last = options.k_max;
  if (const auto bound = proper_divisor_k_bound(n)) last = std::min(last, *bound - 1);
  if (last == 0) return {};

  std::vector<CandidateDivisor> found;
  const std::uint64_t workers = std::clamp<std::uint64_t>(options.threads, 1, last);
  if (workers == 1) {
    search_range(n, 1, last, options, found);
    return found;
  }

  std::mutex merge;
  {
    std::vector<std::jthread> pool;
    const std::uint64_t chunk = (last + workers - 1) / workers;
    for (std::uint64_t first = 1; first <= last; first += chunk) {
      const std::uint64_t end = std::min(last, first + chunk - 1);
      pool.emplace_back([&, first, end] {
        std::vector<CandidateDivisor> local;
        search_range(n, first, end, options, local);
        const std::scoped_lock lock(merge);
        std::ranges::move(local, std::back_inserter(found));
      });
    }
  }
  std::ranges::sort(found, {}, &CandidateDivisor::k);
  return found;
}

bool validate_lucas_multiplier(const CandidateDivisor& d) {
  if (!d.divides) {
    throw Error(ErrorCode::kCalledOnNondivisor,
                "candidate k=" + std::to_string(d.k) + " does not divide F_" + std::to_string(d.n.value()));
  }
  return d.k > 1 && !std::has_single_bit(d.k);
}

}  // namespace fermat_lab
