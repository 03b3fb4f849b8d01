#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace latbose {

/// Failure kinds raised by the library. Validation kinds describe bad input,
/// compute kinds describe a numerical routine that could not deliver.
enum class ErrorKind {
  // input validation
  SingularBasis,
  MissingPrimitiveHopping,
  NonPositiveWeight,
  DirectionNotPositive,
  DuplicateDirection,
  InvalidConfig,
  InvalidArgument,
  OddLatticeSize,
  GridTooCoarse,
  DimensionCap,
  DomainError,
  InvalidMu,
  EmptyWindow,
  NegativeCondensate,
  // numerical failures
  NoConvergence,
  OscillatoryNoConvergence,
  NonFiniteIntegrand,
  IntegrandNegative,
  OrderingViolation,
  GapBoundViolation,
  NegativeDiscriminant,
  SuperadditivityViolation,
  PoorFit,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// True for kinds that signal rejected input rather than a failed computation.
bool is_validation(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace latbose
