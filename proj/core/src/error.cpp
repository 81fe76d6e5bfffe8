#include "consonance/error.hpp"

namespace consonance {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::SpaceTooLarge: return "SpaceTooLarge";
    case ErrorCode::EmptyBag: return "EmptyBag";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::AllZeroContour: return "AllZeroContour";
    case ErrorCode::NonConsonantContour: return "NonConsonantContour";
    case ErrorCode::NegativeMass: return "NegativeMass";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::EmptyList: return "EmptyList";
    case ErrorCode::WrongDimension: return "WrongDimension";
    case ErrorCode::NegativeCount: return "NegativeCount";
    case ErrorCode::AlphaOutOfRange: return "AlphaOutOfRange";
    case ErrorCode::TruncationInsufficient: return "TruncationInsufficient";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::FixtureMismatch: return "FixtureMismatch";
    case ErrorCode::Parse: return "Parse";
  }
  return "Unknown";
}

}  // namespace consonance
