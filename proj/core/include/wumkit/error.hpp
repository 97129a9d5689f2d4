#ifndef WUMKIT_ERROR_HPP_
#define WUMKIT_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wumkit {

/// Base class for every error raised by the library. The CLI maps any
/// Error that escapes a subcommand to exit status 1 (data error).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownServiceError : public Error {
 public:
  explicit UnknownServiceError(std::string token)
      : Error("unknown service '" + token + "'"), token_(std::move(token)) {}
  /// Raised while reading a file; `line` is 1-based.
  UnknownServiceError(std::string token, std::size_t line)
      : Error("line " + std::to_string(line) + ": unknown service '" + token +
              "'"),
        token_(std::move(token)),
        line_(line) {}
  const std::string& token() const noexcept { return token_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string token_;
  std::size_t line_ = 0;
};

/// Malformed delimited-text input. Line numbers are 1-based and count the
/// header; column is the 1-based field index (0 when the whole row is bad).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : Error("line " + std::to_string(line) +
              (column ? ", column " + std::to_string(column) : std::string()) +
              ": " + what),
        line_(line),
        column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

class DegenerateTableError : public Error {
 public:
  using Error::Error;
};

class UnknownAttributeError : public Error {
 public:
  explicit UnknownAttributeError(const std::string& name)
      : Error("unknown attribute '" + name + "'") {}
};

class UnknownNodeError : public Error {
 public:
  explicit UnknownNodeError(const std::string& name)
      : Error("unknown graph node '" + name + "'") {}
};

class UnknownFormatError : public Error {
 public:
  explicit UnknownFormatError(const std::string& name)
      : Error("unknown output format '" + name + "'") {}
};

/// Rule generation found a frequent itemset whose subset is absent from the
/// frequent list, i.e. the input is not downward closed.
class MissingSubsetError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace wumkit

#endif  // WUMKIT_ERROR_HPP_
