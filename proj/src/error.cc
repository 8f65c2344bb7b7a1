#include "dubins_smooth/error.h"

namespace dubins_smooth {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDegeneratePath: return "DegeneratePath";
    case ErrorCode::kNonFinite: return "NonFinite";
    case ErrorCode::kSingularControl: return "SingularControl";
    case ErrorCode::kProjectionSingular: return "ProjectionSingular";
    case ErrorCode::kNonPositive: return "NonPositive";
    case ErrorCode::kNonPositiveSpeed: return "NonPositiveSpeed";
    case ErrorCode::kInfeasibleSlope: return "InfeasibleSlope";
    case ErrorCode::kInfeasibleSpeed: return "InfeasibleSpeed";
    case ErrorCode::kTooShort: return "TooShort";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kLpFailed: return "LpFailed";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kConfig: return "Config";
  }
  return "Unknown";
}

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDegeneratePath:
    case ErrorCode::kNonFinite:
    case ErrorCode::kProjectionSingular:
    case ErrorCode::kInfeasibleSlope:
    case ErrorCode::kInfeasibleSpeed:
    case ErrorCode::kTooShort:
      return 2;
    case ErrorCode::kIo:
    case ErrorCode::kConfig:
    case ErrorCode::kNonPositive:
    case ErrorCode::kNonPositiveSpeed:
    case ErrorCode::kDimensionMismatch:
    case ErrorCode::kTooLarge:
      return 3;
    case ErrorCode::kSingularControl:
    case ErrorCode::kLpFailed:
      return 4;
  }
  return 4;
}

SmoothingError::SmoothingError(ErrorCode code, const std::string& message,
                               std::optional<int> station, std::string stage)
    : std::runtime_error(Compose(code, message, station, stage)),
      code_(code),
      station_(station),
      stage_(std::move(stage)),
      detail_(message) {}

SmoothingError SmoothingError::WithStage(const std::string& stage) const {
  return SmoothingError(code_, detail_, station_, stage);
}

std::string SmoothingError::Compose(ErrorCode code, const std::string& message,
                                    std::optional<int> station,
                                    const std::string& stage) {
  std::string text = ErrorCodeName(code);
  if (!stage.empty()) text += " in stage '" + stage + "'";
  if (station) text += " at station " + std::to_string(*station);
  text += ": " + message;
  return text;
}

}  // namespace dubins_smooth
