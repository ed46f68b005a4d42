#pragma once

#include <stdexcept>
#include <string>

namespace girko {

/// Base class of every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller violated a precondition (shape, range, parameter domain).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// An iterative kernel did not converge or produced non-finite output.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// A file could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

#define GIRKO_DEFINE_ERROR(Name, Base) \
  class Name : public Base {           \
   public:                             \
    using Base::Base;                  \
  }

GIRKO_DEFINE_ERROR(DimensionMismatch, InvalidInput);
GIRKO_DEFINE_ERROR(IndexOutOfRange, InvalidInput);
GIRKO_DEFINE_ERROR(InvalidParameter, InvalidInput);
GIRKO_DEFINE_ERROR(NonUnitary, InvalidInput);
GIRKO_DEFINE_ERROR(ContourTooClose, InvalidInput);
GIRKO_DEFINE_ERROR(InsufficientData, InvalidInput);
GIRKO_DEFINE_ERROR(InsufficientSamples, InvalidInput);
GIRKO_DEFINE_ERROR(QuantileOutOfSupport, InvalidInput);

GIRKO_DEFINE_ERROR(DegenerateSpectrum, NumericalFailure);
GIRKO_DEFINE_ERROR(RankDeficient, NumericalFailure);
GIRKO_DEFINE_ERROR(SingularSystemError, NumericalFailure);
GIRKO_DEFINE_ERROR(NonConvergence, NumericalFailure);
GIRKO_DEFINE_ERROR(GridUnderflow, NumericalFailure);

#undef GIRKO_DEFINE_ERROR

}  // namespace girko
