#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace latloc {

// Base for every error raised by the library. The CLI maps these to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ResourceLimitError : public Error {
 public:
  using Error::Error;
};

}  // namespace latloc
