#include "privsearch/error.hpp"

namespace privsearch {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDomainError: return "DomainError";
    case ErrorCode::kEmptySet: return "EmptySet";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kDuplicateIndexInSet: return "DuplicateIndexInSet";
    case ErrorCode::kDuplicatePattern: return "DuplicatePattern";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kBadIndexList: return "BadIndexList";
    case ErrorCode::kBadSplit: return "BadSplit";
    case ErrorCode::kBadSequence: return "BadSequence";
    case ErrorCode::kNTooSmall: return "NTooSmall";
    case ErrorCode::kTooManyMessagesForExhaustive: return "TooManyMessagesForExhaustive";
    case ErrorCode::kNotBalanced: return "NotBalanced";
    case ErrorCode::kSequenceTooShort: return "SequenceTooShort";
    case ErrorCode::kNotDivisible: return "NotDivisible";
    case ErrorCode::kDepthTooLarge: return "DepthTooLarge";
    case ErrorCode::kOddK: return "OddK";
    case ErrorCode::kInfeasibleBudget: return "InfeasibleBudget";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kLayoutMismatch: return "LayoutMismatch";
    case ErrorCode::kIOError: return "IOError";
    case ErrorCode::kUsageError: return "UsageError";
  }
  return "Unknown";
}

}  // namespace privsearch
