#pragma once

#include <stdexcept>
#include <string>

namespace synadv {

// Base error for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid or inconsistent configuration (mapped to CLI exit code 1).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed input file; the message carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace synadv
