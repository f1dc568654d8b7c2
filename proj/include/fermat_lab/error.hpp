#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fermat_lab {

enum class ErrorCode {
  kIndexOutOfRange,
  kIndexBelowTwo,
  kModulusMismatch,
  kNonAdmissibleBase,
  kBaseNotCoprime,
  kEvenOrUnitModulus,
  kCalledOnNondivisor,
  kZeroModulus,
  kNegativeResult,
  kInvalidArgument,
  kTheoremViolation,
  kCorruptCheckpoint,
};

std::string_view to_string(ErrorCode code);

/// Base class of every error raised by the library. The code is stable and
/// is what the command line maps onto exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fermat_lab
