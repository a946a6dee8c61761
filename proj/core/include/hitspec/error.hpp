#pragma once

#include <stdexcept>
#include <string>

namespace hitspec {

// All library failures derive from Error so callers can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Coefficients are non-finite, non-positive diffusion, or the requested
// interval leaves the natural domain.
class ModelDomainError : public Error {
 public:
  using Error::Error;
};

// Speed measure has infinite mass on the requested interval.
class NotNormalizableError : public Error {
 public:
  using Error::Error;
};

// Grid or generator construction failed (e.g. inaccessible boundary).
class DiscretizationError : public Error {
 public:
  using Error::Error;
};

// Linear algebra failure: eigensolver did not converge, singular solve.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Invalid caller input (bad split point, malformed expression, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace hitspec
