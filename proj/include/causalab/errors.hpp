#ifndef CAUSALAB_ERRORS_HPP
#define CAUSALAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace causalab {

// Exit-code classes used by the CLI: validation -> 2, non-convergence -> 3,
// property assertion -> 4.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ValidationError : Error {
  using Error::Error;
};

struct NumericalError : Error {
  using Error::Error;
};

struct PropertyError : Error {
  using Error::Error;
};

struct NonConvergence : NumericalError {
  using NumericalError::NumericalError;
};
struct MissedRoot : NumericalError {
  using NumericalError::NumericalError;
};
struct TruncatedBasis : NumericalError {
  using NumericalError::NumericalError;
};

struct GridTooCoarse : ValidationError {
  using ValidationError::ValidationError;
};
struct GridMismatch : ValidationError {
  using ValidationError::ValidationError;
};
struct OutOfDomain : ValidationError {
  using ValidationError::ValidationError;
};
struct EmptyRegion : ValidationError {
  using ValidationError::ValidationError;
};
struct DimensionMismatch : ValidationError {
  using ValidationError::ValidationError;
};
struct SpanViolation : ValidationError {
  using ValidationError::ValidationError;
};
struct AmplitudeTooLarge : ValidationError {
  using ValidationError::ValidationError;
};
struct MissingColumn : ValidationError {
  using ValidationError::ValidationError;
};

struct BoundaryViolation : PropertyError {
  using PropertyError::PropertyError;
};
struct SupportTooWide : PropertyError {
  using PropertyError::PropertyError;
};
struct UnsafeState : PropertyError {
  using PropertyError::PropertyError;
};
struct ResolutionInsufficient : PropertyError {
  using PropertyError::PropertyError;
};

}  // namespace causalab

#endif
