#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nfw {

enum class ErrorKind {
  Syntax,
  MissingTypes,
  TypeOutOfRange,
  NotIncreasing,
  Capture,
  NotASentence,
  BudgetExceeded,
  SizeMismatch,
  SizeConstraintViolated,
  MissingIndex,
  InvalidParams,
  NotABijection,
  NotLocallySmall,
  UnbalancedLitter,
  NotStrong,
  SearchBudgetExceeded,
  InvalidInput,
};

const char* to_string(ErrorKind kind);

// Single exception type for the whole library; callers dispatch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t offset, const std::string& what)
      : Error(ErrorKind::Syntax,
              "syntax error at byte " + std::to_string(offset) + ": " + what),
        offset_(offset) {}

  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace nfw
