#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace consonance {

enum class ErrorCode : std::uint8_t {
  InvalidArgument,
  Overflow,
  SpaceTooLarge,
  EmptyBag,
  UnknownLabel,
  AllZeroContour,
  NonConsonantContour,
  NegativeMass,
  BudgetExceeded,
  EmptyList,
  WrongDimension,
  NegativeCount,
  AlphaOutOfRange,
  TruncationInsufficient,
  InvalidSpec,
  FixtureMismatch,
  Parse,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every library failure is reported through this type; `code()` is stable
// across releases, the message is not.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

#define CONSONANCE_REQUIRE(cond, code, msg)            \
  do {                                                 \
    if (!(cond)) throw ::consonance::Error((code), (msg)); \
  } while (false)

}  // namespace consonance
