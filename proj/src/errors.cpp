#include "kelab/errors.hpp"

namespace kelab {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DomainTooSmall: return "DomainTooSmall";
    case ErrorCode::WrongBoundary: return "WrongBoundary";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::NonPositiveValue: return "NonPositiveValue";
    case ErrorCode::NonPositiveDensity: return "NonPositiveDensity";
    case ErrorCode::NonPositiveTarget: return "NonPositiveTarget";
    case ErrorCode::NegativeDensity: return "NegativeDensity";
    case ErrorCode::EmptyDensity: return "EmptyDensity";
    case ErrorCode::OrthogonalityViolation: return "OrthogonalityViolation";
  }
  return "UnknownError";
}

}  // namespace kelab
