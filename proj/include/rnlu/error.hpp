#pragma once

#include <stdexcept>
#include <string>

namespace rnlu {

// Base class for all toolkit errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input text (corpus XML, dictionary, answers file). Carries a
// 1-based line number when one is known; line == 0 means "unknown".
struct ParseError : Error {
  explicit ParseError(const std::string& msg, int line_no = 0)
      : Error(line_no > 0 ? "line " + std::to_string(line_no) + ": " + msg : msg),
        line(line_no) {}
  int line;
};

// Structurally well-formed input that violates a contract (empty interaction,
// unknown category, dictionary/model mismatch, ...).
struct ValidationError : Error {
  using Error::Error;
};

// Model file problems: bad magic, unsupported version, truncation, checksum.
struct FormatError : Error {
  using Error::Error;
};

}  // namespace rnlu
