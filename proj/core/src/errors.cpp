#include "bjacobi/errors.hpp"

namespace bjacobi {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::NotOrdered: return "NotOrdered";
    case ErrorKind::GapTooSmall: return "GapTooSmall";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::Singular: return "Singular";
    case ErrorKind::NotWellPosed: return "NotWellPosed";
    case ErrorKind::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorKind::InsufficientSamples: return "InsufficientSamples";
    case ErrorKind::NoQualifyingSegments: return "NoQualifyingSegments";
    case ErrorKind::RefinementExhausted: return "RefinementExhausted";
    case ErrorKind::Config: return "Config";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace bjacobi
