#pragma once

#include <stdexcept>
#include <string>

namespace codec {

enum class ErrorKind {
  ingestion,          // unreadable file, malformed or non-numeric cell
  schema,             // duplicate/missing columns
  size,               // too few (or too many) observations
  argument,           // bad index, bad parameter
  dimension,          // mismatched lengths or widths
  degenerate,         // denominator zero: Y is an in-sample function of X
  constant_response,  // Y constant, unconditional denominator zero
  enumeration_guard,  // subset enumeration too large
};

/// Single exception type for the library; `kind()` selects the CLI exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// True for statistical degeneracy (as opposed to bad input).
  bool is_degenerate() const noexcept {
    return kind_ == ErrorKind::degenerate || kind_ == ErrorKind::constant_response;
  }

 private:
  ErrorKind kind_;
};

const char* to_string(ErrorKind kind) noexcept;

}  // namespace codec
