#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace llull {

enum class Errc {
  kSyntaxError,
  kUnknownOption,
  kEmptyProfile,
  kEmptySubset,
  kNotAutonomous,
  kBadRepresentative,
  kInvalidMatrix,
  kZeroTurnout,
  kZeroOpposingScore,
  kSingleOption,
  kNotAPermutation,
  kTieGroupTooLarge,
  kNotClc,
  kNonPositiveStrength,
  kNotIrreducible,
  kMaxIterExceeded,
  kNoTopDominantComponent,
  kProjectionPostconditionViolated,
  kPowerIterationDiverged,
  kHypothesisNotSatisfied,
  kNotAnImprovement,
  kSupportHypothesisFailed,
  kInvalidArgument,
  kInternalError,
};

std::string_view errc_name(Errc code);

// Every failure raised by the library carries one of the codes above so that
// callers (the CLI in particular) can map it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t line, std::size_t column, const std::string& msg)
      : Error(Errc::kSyntaxError, "line " + std::to_string(line) + ", column " +
                                      std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace llull
