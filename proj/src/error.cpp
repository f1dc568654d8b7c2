#include "fermat_lab/error.hpp"

namespace fermat_lab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIndexOutOfRange: return "index-out-of-range";
    case ErrorCode::kIndexBelowTwo: return "index-below-two";
    case ErrorCode::kModulusMismatch: return "modulus-mismatch";
    case ErrorCode::kNonAdmissibleBase: return "non-admissible-base";
    case ErrorCode::kBaseNotCoprime: return "base-not-coprime";
    case ErrorCode::kEvenOrUnitModulus: return "even-or-unit-modulus";
    case ErrorCode::kCalledOnNondivisor: return "called-on-nondivisor";
    case ErrorCode::kZeroModulus: return "zero-modulus";
    case ErrorCode::kNegativeResult: return "negative-result";
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kTheoremViolation: return "theorem-violation";
    case ErrorCode::kCorruptCheckpoint: return "corrupt-checkpoint";
  }
  return "unknown";
}

}  // namespace fermat_lab
