#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pcfp {

// Process exit codes used by the command-line front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitParse = 2,
  kExitValidation = 3,
  kExitSolver = 4,
  kExitLimits = 5,
  kExitCapacityViolation = 6,  // only with --strict
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const { return kExitUsage; }
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Malformed instance document. `line`/`column` are 1-based; both are zero
// when the problem is semantic (unknown id, nonpositive value).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0,
             std::size_t column = 0)
      : Error(what), line_(line), column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  int exit_code() const override { return kExitParse; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class ValidationError : public Error {
 public:
  using Error::Error;
  int exit_code() const override { return kExitValidation; }
};

class SolverError : public Error {
 public:
  using Error::Error;
  int exit_code() const override { return kExitSolver; }
};

class LimitError : public Error {
 public:
  using Error::Error;
  int exit_code() const override { return kExitLimits; }
};

}  // namespace pcfp
