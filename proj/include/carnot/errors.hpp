#pragma once

#include <stdexcept>
#include <string>

namespace carnot {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
  using Error::Error;
};

/// Malformed text input. Line and column are 1-based; zero means unknown.
class ParseError : public Error {
public:
  ParseError(const std::string& message, int line = 0, int column = 0)
      : Error(format(message, line, column)), line_(line), column_(column)
  {
  }
  int line() const { return line_; }
  int column() const { return column_; }

private:
  static std::string format(const std::string& message, int line, int column)
  {
    if (line > 0)
      return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message;
    if (column > 0)
      return "column " + std::to_string(column) + ": " + message;
    return message;
  }
  int line_;
  int column_;
};

class DegreeOverflow : public Error {
public:
  using Error::Error;
};

class SingularFrame : public Error {
public:
  using Error::Error;
};

/// Raised when an operation needs a chart that passes the filtration check.
class FiltrationError : public Error {
public:
  using Error::Error;
};

class ChartMismatch : public Error {
public:
  using Error::Error;
};

class MembershipError : public Error {
public:
  using Error::Error;
};

class DomainError : public Error {
public:
  using Error::Error;
};

class ConvergenceError : public Error {
public:
  using Error::Error;
};

class CompositionError : public Error {
public:
  using Error::Error;
};

} // namespace carnot
