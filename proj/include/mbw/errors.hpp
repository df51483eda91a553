#ifndef MBW_ERRORS_HPP
#define MBW_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mbw {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Density evaluated where it is infinite (Weibull shape < 1 at zero).
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// An iterative method ran out of budget before meeting its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Input has collapsed to a case the estimator cannot handle (e.g. d = 0).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// Clustering labelled every point as noise.
class NoClusterError : public Error {
 public:
  using Error::Error;
};

/// Survival underflowed to zero so the hazard ratio is not representable.
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// Malformed CSV or JSON input.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A file could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace mbw

#endif  // MBW_ERRORS_HPP
