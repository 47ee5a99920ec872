#pragma once

#include <stdexcept>
#include <string>

namespace ruelle {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed input document (missing field, wrong type).
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Input that parses but breaks a model invariant.
class InvariantError : public Error {
 public:
  using Error::Error;
};

/// Floquet integration or decomposition failure.
class FloquetError : public Error {
 public:
  using Error::Error;
};

/// Precondition failure in a spectral computation.
class SpectrumError : public Error {
 public:
  using Error::Error;
};

/// Precondition failure when building or pairing resonant-state germs.
class StateError : public Error {
 public:
  using Error::Error;
};

/// Numerical breakdown in exponential fitting.
class OracleError : public Error {
 public:
  using Error::Error;
};

}  // namespace ruelle
