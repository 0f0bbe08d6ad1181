#pragma once

#include <stdexcept>
#include <string>

namespace dmargin {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed or out-of-contract input (bad polynomial, schema violation, ...).
class InvalidInputError : public Error {
  public:
    using Error::Error;
};

/// A pole or zero sits on (or numerically on) the imaginary axis, where the
/// interpolation theory does not apply.
class ImaginaryAxisError : public InvalidInputError {
  public:
    using InvalidInputError::InvalidInputError;
};

/// Coincident interpolation nodes; repeated poles/zeros are unsupported.
class MultiplicityError : public InvalidInputError {
  public:
    using InvalidInputError::InvalidInputError;
};

/// The plant has no unstable pole, so the delay margin is trivially infinite
/// and no margin computation is performed.
class StablePlantError : public Error {
  public:
    using Error::Error;
};

/// Shift parameter violates the Re(w0) < 1/2 validity constraint.
class ShiftDomainError : public InvalidInputError {
  public:
    using InvalidInputError::InvalidInputError;
};

/// Quadrature self-check failed to reach the requested tolerance. Carries the
/// two panel-resolution estimates of log|W| that disagreed.
class AccuracyError : public Error {
  public:
    AccuracyError(const std::string& what, double coarse, double fine)
        : Error(what), coarse_(coarse), fine_(fine) {}
    double coarse_estimate() const { return coarse_; }
    double fine_estimate() const { return fine_; }

  private:
    double coarse_;
    double fine_;
};

/// Non-finite values or a numerically failed computation.
class NumericError : public Error {
  public:
    using Error::Error;
};

}  // namespace dmargin
