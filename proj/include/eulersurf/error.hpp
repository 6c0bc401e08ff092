#pragma once

#include <stdexcept>
#include <string>

namespace eulersurf {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-supplied parameter is outside its documented domain
/// (probability outside [0,1], stride 0, unknown kind, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Input data violates a structural invariant (non-monotone filtration,
/// dangling face reference, mismatched shapes).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Point configuration is not in general position for the requested
/// construction.
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

/// A file or stream could not be parsed.
class FormatError : public Error {
 public:
  enum class Kind { kMalformedHeader, kTruncatedPayload, kMaxvalOverflow, kShapeMismatch, kSyntax, kIo };

  FormatError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// An internal consistency check failed (e.g. fast algorithm disagrees
/// with the brute-force recount).
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace eulersurf
