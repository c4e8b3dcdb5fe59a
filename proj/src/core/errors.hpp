#pragma once

#include <stdexcept>
#include <string>

namespace feecns {

enum class ErrorCode {
  InvalidArgument = 1,
  ConfigError = 2,
  IoError = 3,
  NumericalBreakdown = 4,
  FactorizationFailure = 5,
  StepFailure = 6,
  IncompatibleOperands = 7,
  OutOfDomain = 8,
  DegenerateStencil = 9,
  DataError = 10,
};

/// Base exception for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace feecns
