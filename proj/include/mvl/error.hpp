#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mvl {

// Keep in sync with mvl_status in mvl.h; the C API maps these one to one.
enum class ErrorCode : int {
  NotALattice = 10,
  CycleInOrder,
  DuplicateLabel,
  BadMonoid,
  LatticeTooLarge,
  ForeignElement,
  UnknownLabel,
  NotBrouwer,
  NotResiduated,
  NotAtomRepresentable,
  SumNotInLattice,
  UninterpretableTerm,
  UnknownConstant,
  MissingVariable,
  MismatchedScales,
  MismatchedCarriers,
  FewerThanTwoSets,
  EmptyAssessment,
  NotConverged,
  InvalidSpec,
  SyntaxError,
  UnresolvedReference,
  UnknownFixture,
  InvalidArgument,
};

std::string_view error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(error_name(code)) + ": " + detail), code_(code), detail_(detail) {}

  ErrorCode code() const noexcept { return code_; }
  /// Message without the error name prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

/// Parse failure with a 1-based source position.
class SyntaxError : public Error {
 public:
  SyntaxError(int line, int column, const std::string& expected)
      : Error(ErrorCode::SyntaxError,
              "line " + std::to_string(line) + ", column " + std::to_string(column) +
                  ": expected " + expected),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace mvl
