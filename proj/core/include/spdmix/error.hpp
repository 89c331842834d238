#pragma once

#include <stdexcept>
#include <string>

namespace spdmix {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical failure inside a matrix routine (non-convergence, non-positive
/// spectrum, overflow, failed pivot).
class LinalgError : public Error {
 public:
  using Error::Error;
};

/// Operands of incompatible shape.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Input is well-formed but unsuitable for the requested operation, e.g. a
/// classification dataset handed to a regression harness.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A checked mathematical invariant did not hold on concrete data.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

/// Malformed or unreadable dataset file.
class FormatError : public Error {
 public:
  enum class Kind {
    kIo,
    kBadMagic,
    kVersionMismatch,
    kUnsupportedFlags,
    kTruncatedPayload,
    kTrailingData,
    kLabelCountMismatch,
    kParse,
  };

  FormatError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

}  // namespace spdmix
