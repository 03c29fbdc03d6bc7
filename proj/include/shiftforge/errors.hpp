#pragma once

#include <stdexcept>
#include <string>

namespace shiftforge {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text (file formats, coefficient encodings).
class FormatError : public Error {
 public:
  using Error::Error;
};

/// A mathematical precondition does not hold.
class DomainError : public Error {
 public:
  using Error::Error;
};

class DomainMismatch : public DomainError {
 public:
  using DomainError::DomainError;
};

class ArityMismatch : public DomainError {
 public:
  using DomainError::DomainError;
};

class UnsupportedDomain : public DomainError {
 public:
  using DomainError::DomainError;
};

class InvalidGamma : public DomainError {
 public:
  using DomainError::DomainError;
};

class PreconditionError : public DomainError {
 public:
  using DomainError::DomainError;
};

class NotASolution : public DomainError {
 public:
  using DomainError::DomainError;
};

class StructureError : public DomainError {
 public:
  using DomainError::DomainError;
};

class NoReduction : public DomainError {
 public:
  using DomainError::DomainError;
};

// Raised when a checked consequence of the reduction fails. Indicates a bug.
class InternalConsistency : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Term count or enumeration size above the configured cap.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace shiftforge
