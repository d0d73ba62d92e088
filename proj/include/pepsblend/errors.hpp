#pragma once

#include <stdexcept>
#include <string>

namespace pepsblend {

// Every recoverable failure mode gets its own type so callers (and the CLI
// exit-code mapping) can distinguish them without string matching.

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigInvalid : Error {
  using Error::Error;
};
struct IoError : Error {
  using Error::Error;
};

struct MixedFields : Error {
  MixedFields() : Error("operands belong to different fields") {}
  explicit MixedFields(const std::string& what) : Error(what) {}
};
struct DivisionByZero : Error {
  DivisionByZero() : Error("division by zero") {}
};
struct NonFiniteInput : Error {
  NonFiniteInput() : Error("sample is not finite") {}
};

struct SingularMatrix : Error {
  SingularMatrix() : Error("matrix is singular") {}
};
struct SizeCapExceeded : Error {
  using Error::Error;
};
struct SupportOutOfRange : Error {
  using Error::Error;
};
struct ZeroNorm : Error {
  ZeroNorm() : Error("state has zero norm") {}
};
struct ShapeMismatch : Error {
  using Error::Error;
};

struct DuplicateAbscissa : Error {
  DuplicateAbscissa() : Error("sample abscissae are not pairwise distinct") {}
};
struct InsufficientSamples : Error {
  using Error::Error;
};
struct DecodingFailure : Error {
  // PromiseViolated: a best candidate exists but misses the agreement
  // threshold (not enough correct samples). Structural: no candidate at all
  // (degenerate locator, inexact division, degree overflow).
  enum class Kind { PromiseViolated, Structural };
  Kind kind;
  explicit DecodingFailure(const std::string& what, Kind k = Kind::Structural) : Error(what), kind(k) {}
};
struct DegenerateSystem : Error {
  using Error::Error;
};
struct NonPositiveEpsilon : Error {
  NonPositiveEpsilon() : Error("interval radius must be positive") {}
};
struct PointOutsideRadius : Error {
  using Error::Error;
};

struct MajorityTie : Error {
  using Error::Error;
};
struct AllRepeatsFailedDecoding : Error {
  using Error::Error;
};
struct ZeroDenominatorAtOne : Error {
  ZeroDenominatorAtOne() : Error("reconstructed denominator vanishes at t = 1") {}
};

}  // namespace pepsblend
