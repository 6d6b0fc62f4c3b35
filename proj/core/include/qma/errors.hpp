#ifndef QMA_ERRORS_HPP
#define QMA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qma {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonFiniteInput : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct IndexOutOfRange : Error { using Error::Error; };
struct UnsupportedCombination : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };

struct LinearSolveFailure : Error { using Error::Error; };
struct EllipticityLoss : Error { using Error::Error; };
struct LineSearchFailure : Error { using Error::Error; };
struct NormalizationViolation : Error { using Error::Error; };
struct ContinuationStalled : Error { using Error::Error; };
struct DegenerateSeed : Error { using Error::Error; };

struct ParseError : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };

} // namespace qma

#endif
