#pragma once

#include <stdexcept>
#include <string>

namespace ipm {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A syntax error in SMT-LIB or Dafny-subset input, with the position of
/// the offending character (1-based).
class ParseError : public Error {
 public:
  ParseError(const std::string& message, unsigned line, unsigned column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        message_(message),
        line_(line),
        column_(column) {}

  const std::string& message() const { return message_; }
  unsigned line() const { return line_; }
  unsigned column() const { return column_; }

 private:
  std::string message_;
  unsigned line_;
  unsigned column_;
};

}  // namespace ipm
