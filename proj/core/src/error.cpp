#include "entrocode/error.hpp"

namespace entrocode {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNegativePowerOfNoninvertibleMap:
      return "NegativePowerOfNoninvertibleMap";
    case ErrorCode::kStateOutOfDomain:
      return "StateOutOfDomain";
    case ErrorCode::kJacobianUnavailable:
      return "JacobianUnavailable";
    case ErrorCode::kUnknownSystem:
      return "UnknownSystem";
    case ErrorCode::kBadParams:
      return "BadParams";
    case ErrorCode::kSeedRequired:
      return "SeedRequired";
    case ErrorCode::kEmptyTypicalSet:
      return "EmptyTypicalSet";
    case ErrorCode::kDegenerateFrame:
      return "DegenerateFrame";
    case ErrorCode::kInfeasibleBlockLength:
      return "InfeasibleBlockLength";
    case ErrorCode::kPartitionTooCoarse:
      return "PartitionTooCoarse";
    case ErrorCode::kTypicalSetOverflow:
      return "TypicalSetOverflow";
    case ErrorCode::kMassThresholdUnmet:
      return "MassThresholdUnmet";
    case ErrorCode::kValueOutOfRange:
      return "ValueOutOfRange";
    case ErrorCode::kHorizonTooShort:
      return "HorizonTooShort";
    case ErrorCode::kWindowMismatch:
      return "WindowMismatch";
    case ErrorCode::kConfig:
      return "ConfigError";
  }
  return "Unknown";
}

}  // namespace entrocode
