#include "gcf/error.hpp"

namespace gcf {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NonPositiveArgument: return "NonPositiveArgument";
    case ErrorKind::InvalidSpeedLaw: return "InvalidSpeedLaw";
    case ErrorKind::InvalidGrid: return "InvalidGrid";
    case ErrorKind::NonConvex: return "NonConvex";
    case ErrorKind::OriginOutside: return "OriginOutside";
    case ErrorKind::WrongLawForm: return "WrongLawForm";
    case ErrorKind::NonPositiveTime: return "NonPositiveTime";
    case ErrorKind::InsufficientTrace: return "InsufficientTrace";
    case ErrorKind::BadExponent: return "BadExponent";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

}  // namespace gcf
