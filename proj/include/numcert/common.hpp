#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace numcert {

/// Base class for all errors thrown by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed textual input (polynomial expression, interval literal, file).
struct ParseError : Error {
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " (at position " + std::to_string(position) + ")"),
        position(position) {}
  std::size_t position;
};

/// Vector/matrix/system sizes do not agree.
struct DimensionMismatch : Error {
  using Error::Error;
};

/// A PolySystem violates a construction invariant (not square, constant
/// equation, inconsistent variable counts).
struct InvalidSystem : Error {
  using Error::Error;
};

/// An operation that needs an invertible Jacobian met a singular one.
struct SingularJacobianError : Error {
  using Error::Error;
};

/// Realness certification requires real coefficients.
struct NonRealCoefficients : Error {
  using Error::Error;
};

struct InvalidArgument : Error {
  using Error::Error;
};

}  // namespace numcert
