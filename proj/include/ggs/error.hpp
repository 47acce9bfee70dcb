#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ggs {

enum class ErrorCode {
  DimensionMismatch,
  IndexOutOfRange,
  InvalidArgument,
  AllZeroGradient,
  ZeroColumn,
  RankDeficient,
  FactorOutOfRange,
  NotApplicable,
  MissingEnergyError,
  NullSpaceEmpty,
  ParseError,
  UnsupportedField,
  Io,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// MatrixMarket and manifest readers report the 1-based line that failed.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace ggs
