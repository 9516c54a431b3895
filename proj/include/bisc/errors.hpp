#pragma once

#include <stdexcept>
#include <string>

namespace bisc {

/// Bad input: wrong side, malformed parameters, a precondition the caller broke.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A configured size cap (enumeration budget, exhaustive-check limit) was exceeded.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A certificate that cannot be replayed on the given graph.
class MalformedCertificate : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Graph text that failed to parse or validate; carries the 1-based line number.
class ParseError : public InvalidArgument {
 public:
  ParseError(int line, const std::string& what)
      : InvalidArgument("line " + std::to_string(line) + ": " + what), line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace bisc
