#pragma once

#include <stdexcept>
#include <string>

namespace mal {

// Base for every error raised by the library. The CLI maps the two
// subclasses onto exit codes 2 and 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input violates a documented precondition (bad spec, out-of-range order,
// insufficient moments, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A numerical procedure failed (no bracket, negative variance beyond
// tolerance, non-convergence).
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace mal
