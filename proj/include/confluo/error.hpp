#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace confluo {

// Base class for every error raised by the library. Budget exhaustion is
// never an error; it is reported in-band by the operation that hit it.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& msg, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class InvalidPosition : public Error {
 public:
  using Error::Error;
};

class CaptureAtPosition : public Error {
 public:
  using Error::Error;
};

class UndeclaredSymbol : public Error {
 public:
  using Error::Error;
};

class NonAlgebraicPattern : public Error {
 public:
  using Error::Error;
};

class NonAlgebraicInput : public Error {
 public:
  using Error::Error;
};

class SharedVariables : public Error {
 public:
  using Error::Error;
};

class SizeLimit : public Error {
 public:
  using Error::Error;
};

class VariableEscape : public Error {
 public:
  using Error::Error;
};

class NonAlgebraicLhs : public Error {
 public:
  using Error::Error;
};

}  // namespace confluo
