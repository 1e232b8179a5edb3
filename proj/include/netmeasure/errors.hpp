#pragma once

#include <stdexcept>
#include <string>

namespace netmeasure {

/// Base class for every error the library raises. `exit_code()` is the CLI
/// contract: 1 parse, 2 instability, 3 enumeration cap, 4 input mismatch.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const noexcept { return 1; }
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line, int column)
      : Error(format(message, line, column)), line_(line), column_(column) {}
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& m, int line, int column) {
    if (line <= 0) return m;
    return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + m;
  }
  int line_;
  int column_;
};

class InstabilityError : public Error {
 public:
  InstabilityError(const std::string& message, double abscissa)
      : Error(message), spectral_abscissa_(abscissa) {}
  int exit_code() const noexcept override { return 2; }
  double spectral_abscissa() const noexcept { return spectral_abscissa_; }

 private:
  double spectral_abscissa_;
};

class EnumerationCapError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 3; }
};

class InputMismatchError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 4; }
};

// Numerical failures below map to exit code 1 in the CLI; the message names
// the failing step.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class NotPositiveDefiniteError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace netmeasure
