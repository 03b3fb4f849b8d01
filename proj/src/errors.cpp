#include "latbose/errors.hpp"

namespace latbose {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::SingularBasis: return "SingularBasis";
    case ErrorKind::MissingPrimitiveHopping: return "MissingPrimitiveHopping";
    case ErrorKind::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorKind::DirectionNotPositive: return "DirectionNotPositive";
    case ErrorKind::DuplicateDirection: return "DuplicateDirection";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::OddLatticeSize: return "OddLatticeSize";
    case ErrorKind::GridTooCoarse: return "GridTooCoarse";
    case ErrorKind::DimensionCap: return "DimensionCap";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::InvalidMu: return "InvalidMu";
    case ErrorKind::EmptyWindow: return "EmptyWindow";
    case ErrorKind::NegativeCondensate: return "NegativeCondensate";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::OscillatoryNoConvergence: return "OscillatoryNoConvergence";
    case ErrorKind::NonFiniteIntegrand: return "NonFiniteIntegrand";
    case ErrorKind::IntegrandNegative: return "IntegrandNegative";
    case ErrorKind::OrderingViolation: return "OrderingViolation";
    case ErrorKind::GapBoundViolation: return "GapBoundViolation";
    case ErrorKind::NegativeDiscriminant: return "NegativeDiscriminant";
    case ErrorKind::SuperadditivityViolation: return "SuperadditivityViolation";
    case ErrorKind::PoorFit: return "PoorFit";
  }
  return "Unknown";
}

bool is_validation(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::SingularBasis:
    case ErrorKind::MissingPrimitiveHopping:
    case ErrorKind::NonPositiveWeight:
    case ErrorKind::DirectionNotPositive:
    case ErrorKind::DuplicateDirection:
    case ErrorKind::InvalidConfig:
    case ErrorKind::InvalidArgument:
    case ErrorKind::OddLatticeSize:
    case ErrorKind::GridTooCoarse:
    case ErrorKind::DimensionCap:
    case ErrorKind::DomainError:
    case ErrorKind::InvalidMu:
    case ErrorKind::EmptyWindow:
    case ErrorKind::NegativeCondensate:
      return true;
    default:
      return false;
  }
}

}  // namespace latbose
