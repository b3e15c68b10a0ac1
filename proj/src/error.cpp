#include "scenery/error.hpp"

namespace scenery {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_params: return "InvalidParams";
    case ErrorCode::invalid_radius: return "InvalidRadius";
    case ErrorCode::depth_exceeded: return "DepthExceeded";
    case ErrorCode::zero_mass: return "ZeroMass";
    case ErrorCode::ambiguous_mass: return "AmbiguousMass";
    case ErrorCode::origin_not_in_support: return "OriginNotInSupport";
    case ErrorCode::precision_loss: return "PrecisionLoss";
    case ErrorCode::unsupported_kind: return "UnsupportedKind";
    case ErrorCode::config_error: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace scenery
