#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace privsearch {

enum class ErrorCode {
  kDomainError,
  kEmptySet,
  kIndexOutOfRange,
  kDuplicateIndexInSet,
  kDuplicatePattern,
  kParseError,
  kBadIndexList,
  kBadSplit,
  kBadSequence,
  kNTooSmall,
  kTooManyMessagesForExhaustive,
  kNotBalanced,
  kSequenceTooShort,
  kNotDivisible,
  kDepthTooLarge,
  kOddK,
  kInfeasibleBudget,
  kLengthMismatch,
  kLayoutMismatch,
  kIOError,
  kUsageError,
};

// Stable identifier used in machine-readable error objects.
std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace privsearch
