#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fermat_lab/error.hpp"
#include "fermat_lab/fermat_arith.hpp"
#include "fermat_lab/natural.hpp"

namespace fermat_lab {

/// Bases for which base^((F_n-1)/2) = -1 characterises primality of F_n.
inline constexpr std::uint64_t kAdmissiblePepinBases[] = {3, 5, 10};

bool is_admissible_pepin_base(const Natural& base);

enum class QuarterTag { kPlusOne, kMinusOne, kOther };

std::string_view to_string(QuarterTag tag);

/// The quarter residue base^((F_n-1)/4) mod F_n together with its class.
struct QuarterClass {
  QuarterTag tag;
  FermatResidue residue;

  static QuarterClass of(const FermatResidue& residue);
};

enum class Classification { kPrime, kPseudoprimeToBase, kCompositeNonPseudoprime };

std::string_view to_string(Classification c);

/// One implication checked against a computed verdict. `applicable` is
/// false when the hypotheses of the statement do not cover (n, base).
struct AuditCheck {
  std::string name;
  bool applicable = false;
  bool holds = true;
};

struct Verdict {
  FermatIndex n;
  Natural base;
  bool pepin_prime;
  bool fermat_congruence_holds;
  QuarterClass quarter;
  FermatResidue half_residue;
  FermatResidue full_residue;
  Classification classification;
  std::vector<AuditCheck> audits;

  bool audits_pass() const;
};

/// Resumable position inside a squaring chain: `residue` is the value after
/// `index` squarings of the reduced base.
struct ChainState {
  std::uint64_t index = 0;
  FermatResidue residue;
};

struct PepinOptions {
  bool allow_any_base = false;
  std::optional<ChainState> resume;
  SquaringObserver observer;
};

struct PepinResult {
  bool pepin_prime;
  FermatResidue half_residue;
  std::uint64_t squarings_performed;  // in this call, excluding resumed work
};

/// base^((F_n-1)/2) mod F_n through 2^n - 1 squarings.
///
/// Throws kIndexBelowTwo for n < 2, kNonAdmissibleBase unless the base is in
/// the allowlist or `allow_any_base` is set, and kBaseNotCoprime when the base
/// shares a factor with F_n.
PepinResult pepin_test(FermatIndex n, const Natural& base = Natural(3), const PepinOptions& options = {});

/// base^((F_n-1)/4) mod F_n through 2^n - 2 squarings.
QuarterClass quarter_residue(FermatIndex n, const Natural& base);

/// base^(F_n - 1) = 1 mod F_n, computed as two squarings past the quarter
/// residue.
bool fermat_congruence(FermatIndex n, const Natural& base);

/// Residues of the single chain base^(2^k) tapped at k = 2^n - 2, 2^n - 1, 2^n.
struct ChainTaps {
  FermatResidue quarter;
  FermatResidue half;
  FermatResidue full;
};

/// Requires n >= 2 and gcd(base, F_n) = 1.
ChainTaps run_tapped_chain(FermatIndex n, const Natural& base);

/// Builds the verdict from chain taps and the primality bit and evaluates
/// every applicable implication. Never throws on a failed implication.
Verdict assemble_verdict(FermatIndex n, const Natural& base, const ChainTaps& taps, bool pepin_prime);

/// Runs the implication checks on an arbitrary verdict (also used to exercise
/// the reporting path with synthetic input).
std::vector<AuditCheck> audit_verdict(const Verdict& verdict);

/// Full classification. The primality bit always comes from the base-3 Pepin
/// chain; for base 3 one chain serves both purposes.
Verdict classify_unchecked(FermatIndex n, const Natural& base);

/// As classify_unchecked but throws TheoremViolation when any applicable
/// implication fails.
Verdict classify(FermatIndex n, const Natural& base);

/// Human-readable residue transcript of a verdict.
std::string transcript(const Verdict& verdict);

class TheoremViolation : public Error {
 public:
  explicit TheoremViolation(Verdict verdict);

  const Verdict& verdict() const noexcept { return verdict_; }

 private:
  Verdict verdict_;
};

/// Throws kBaseNotCoprime (with the gcd, a factor of F_n) unless
/// gcd(base, F_n) = 1.
void require_coprime(FermatIndex n, const Natural& base);

void require_index_at_least_two(FermatIndex n);

}  // namespace fermat_lab
