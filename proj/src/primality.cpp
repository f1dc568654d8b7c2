#include "fermat_lab/primality.hpp"

#include <algorithm>
#include <sstream>

namespace fermat_lab {

namespace {

bool reduces_to(FermatIndex n, const Natural& base, std::uint64_t value) {
  return reduce_fold(base, n).value() == Natural(value);
}

std::uint64_t chain_length(FermatIndex n) { return static_cast<std::uint64_t>(n.modulus_bits()); }

std::string failure_summary(const Verdict& verdict) {
  std::ostringstream out;
  out << "theorem violation for n=" << verdict.n.value() << ", base=" << verdict.base.to_hex() << ": failed";
  for (const auto& check : verdict.audits) {
    if (check.applicable && !check.holds) out << ' ' << check.name;
  }
  return out.str();
}

}  // namespace

bool is_admissible_pepin_base(const Natural& base) {
  return std::ranges::any_of(kAdmissiblePepinBases, [&](std::uint64_t b) { return base == Natural(b); });
}

std::string_view to_string(QuarterTag tag) {
  switch (tag) {
    case QuarterTag::kPlusOne: return "PlusOne";
    case QuarterTag::kMinusOne: return "MinusOne";
    case QuarterTag::kOther: return "Other";
  }
  return "Other";
}

std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::kPrime: return "Prime";
    case Classification::kPseudoprimeToBase: return "PseudoprimeToBase";
    case Classification::kCompositeNonPseudoprime: return "CompositeNonPseudoprime";
  }
  return "CompositeNonPseudoprime";
}

QuarterClass QuarterClass::of(const FermatResidue& residue) {
  if (residue.is_one()) return {QuarterTag::kPlusOne, residue};
  if (residue.is_minus_one()) return {QuarterTag::kMinusOne, residue};
  return {QuarterTag::kOther, residue};
}

bool Verdict::audits_pass() const {
  return std::ranges::all_of(audits, [](const AuditCheck& c) { return !c.applicable || c.holds; });
}

void require_index_at_least_two(FermatIndex n) {
  if (n.value() < 2) {
    throw Error(ErrorCode::kIndexBelowTwo,
                "Fermat index " + std::to_string(n.value()) + " is below 2; these tests need n >= 2");
  }
}

void require_coprime(FermatIndex n, const Natural& base) {
  const Natural modulus = fermat_value(n);
  const Natural g = gcd(modulus, base % modulus);
  if (!g.is_one()) {
    throw Error(ErrorCode::kBaseNotCoprime, "base 0x" + base.to_hex() + " is not coprime to F_" +
                                                std::to_string(n.value()) + "; gcd = 0x" + g.to_hex());
  }
}

PepinResult pepin_test(FermatIndex n, const Natural& base, const PepinOptions& options) {
  require_index_at_least_two(n);
  if (!options.allow_any_base && !is_admissible_pepin_base(base)) {
    throw Error(ErrorCode::kNonAdmissibleBase,
                "base " + base.to_decimal() + " is not an admissible Pepin base (allowed: 3, 5, 10)");
  }
  require_coprime(n, base);

  const std::uint64_t total = chain_length(n) - 1;
  std::uint64_t start = 0;
  FermatResidue x = reduce_fold(base, n);
  if (options.resume) {
    if (!(options.resume->residue.index() == n) || options.resume->index > total) {
      throw Error(ErrorCode::kInvalidArgument, "resume state does not belong to this chain");
    }
    start = options.resume->index;
    x = options.resume->residue;
  }

  SquaringObserver shifted;
  if (options.observer) {
    shifted = [&](std::uint64_t i, const FermatResidue& r) { options.observer(start + i, r); };
  }
  x = mod_square_chain(x, total - start, shifted);
  const bool prime = x.is_minus_one();
  return PepinResult{prime, std::move(x), total - start};
}

ChainTaps run_tapped_chain(FermatIndex n, const Natural& base) {
  require_index_at_least_two(n);
  require_coprime(n, base);
  FermatResidue quarter = mod_square_chain(reduce_fold(base, n), chain_length(n) - 2);
  FermatResidue half = mod_square(quarter);
  FermatResidue full = mod_square(half);
  return ChainTaps{std::move(quarter), std::move(half), std::move(full)};
}

QuarterClass quarter_residue(FermatIndex n, const Natural& base) {
  require_index_at_least_two(n);
  require_coprime(n, base);
  return QuarterClass::of(mod_square_chain(reduce_fold(base, n), chain_length(n) - 2));
}

bool fermat_congruence(FermatIndex n, const Natural& base) {
  const QuarterClass quarter = quarter_residue(n, base);
  return mod_square_chain(quarter.residue, 2).is_one();
}

std::vector<AuditCheck> audit_verdict(const Verdict& v) {
  const bool large = v.n.value() >= 5;
  const bool base3 = reduces_to(v.n, v.base, 3);
  const bool pseudoprime = v.fermat_congruence_holds && !v.pepin_prime;
  const QuarterTag q = v.quarter.tag;

  std::vector<AuditCheck> checks;
  checks.push_back({"chain_squares", true,
                    mod_square(v.quarter.residue) == v.half_residue && mod_square(v.half_residue) == v.full_residue});
  checks.push_back({"quarter_tag_matches_residue", true, QuarterClass::of(v.quarter.residue).tag == q});
  checks.push_back({"congruence_matches_full_residue", true, v.full_residue.is_one() == v.fermat_congruence_holds});
  {
    const Classification expected = v.pepin_prime   ? Classification::kPrime
                                    : pseudoprime ? Classification::kPseudoprimeToBase
                                                  : Classification::kCompositeNonPseudoprime;
    checks.push_back({"classification_consistent", true, v.classification == expected});
  }
  checks.push_back({"pseudoprime_quarter_is_one", large && pseudoprime, q == QuarterTag::kPlusOne});
  checks.push_back({"quarter_minus_one_implies_prime", large && q == QuarterTag::kMinusOne, v.pepin_prime});
  checks.push_back({"base3_quarter_not_minus_one", large && base3, q != QuarterTag::kMinusOne});
  checks.push_back({"base3_pseudoprime_iff_quarter_one", large && base3, (q == QuarterTag::kPlusOne) == pseudoprime});
  {
    const bool admissible = std::ranges::any_of(
        kAdmissiblePepinBases, [&](std::uint64_t b) { return reduces_to(v.n, v.base, b); });
    checks.push_back({"prime_quarter_not_unit", v.pepin_prime && admissible, q == QuarterTag::kOther});
  }
  return checks;
}

Verdict assemble_verdict(FermatIndex n, const Natural& base, const ChainTaps& taps, bool pepin_prime) {
  const bool congruence = taps.full.is_one();
  const Classification classification = pepin_prime  ? Classification::kPrime
                                        : congruence ? Classification::kPseudoprimeToBase
                                                     : Classification::kCompositeNonPseudoprime;
  Verdict v{n, base, pepin_prime, congruence, QuarterClass::of(taps.quarter), taps.half, taps.full,
            classification, {}};
  v.audits = audit_verdict(v);
  return v;
}

Verdict classify_unchecked(FermatIndex n, const Natural& base) {
  ChainTaps taps = run_tapped_chain(n, base);
  const bool pepin_prime =
      reduces_to(n, base, 3) ? taps.half.is_minus_one() : pepin_test(n, Natural(3)).pepin_prime;
  return assemble_verdict(n, base, taps, pepin_prime);
}

Verdict classify(FermatIndex n, const Natural& base) {
  Verdict v = classify_unchecked(n, base);
  if (!v.audits_pass()) throw TheoremViolation(std::move(v));
  return v;
}

std::string transcript(const Verdict& v) {
  std::ostringstream out;
  out << "n=" << v.n.value() << " base=" << v.base.to_hex() << '\n'
      << "quarter[" << to_string(v.quarter.tag) << "]=" << v.quarter.residue.value().to_hex() << '\n'
      << "half=" << v.half_residue.value().to_hex() << '\n'
      << "full=" << v.full_residue.value().to_hex() << '\n'
      << "pepin_prime=" << (v.pepin_prime ? "true" : "false") << " classification=" << to_string(v.classification)
      << '\n';
  for (const auto& check : v.audits) {
    out << "check " << check.name << ": "
        << (!check.applicable ? "n/a" : check.holds ? "holds" : "VIOLATED") << '\n';
  }
  return out.str();
}

TheoremViolation::TheoremViolation(Verdict verdict)
    : Error(ErrorCode::kTheoremViolation, failure_summary(verdict)), verdict_(std::move(verdict)) {}

}  // namespace fermat_lab
