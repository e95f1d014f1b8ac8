#pragma once

#include <stdexcept>
#include <string>

namespace gbk {

// Base class for every error raised by the library. The CLI maps the
// subclasses onto exit codes (input errors -> 2, numeric failures -> 3).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed arguments: dimension mismatch, wrong grade, bad parameters.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// Linearly dependent basis or otherwise degenerate geometric input.
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

// Point outside the domain of a function (deleted radius, outside a chart).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A documented precondition does not hold (not S-orthogonal, H != 0, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Root finding or quadrature failed, or a value came out non-finite.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Requested object exceeds the fixed size limits of the exterior algebra.
class CapacityError : public Error {
 public:
  using Error::Error;
};

}  // namespace gbk
