#ifndef DUBINS_SMOOTH_ERROR_H_
#define DUBINS_SMOOTH_ERROR_H_

#include <optional>
#include <stdexcept>
#include <string>

namespace dubins_smooth {

enum class ErrorCode {
  kDegeneratePath,
  kNonFinite,
  kSingularControl,
  kProjectionSingular,
  kNonPositive,
  kNonPositiveSpeed,
  kInfeasibleSlope,
  kInfeasibleSpeed,
  kTooShort,
  kTooLarge,
  kDimensionMismatch,
  kLpFailed,
  kIo,
  kConfig,
};

const char* ErrorCodeName(ErrorCode code);

// Process exit code for the command line tool.
int ExitCodeFor(ErrorCode code);

class SmoothingError : public std::runtime_error {
 public:
  SmoothingError(ErrorCode code, const std::string& message,
                 std::optional<int> station = std::nullopt,
                 std::string stage = "");

  ErrorCode code() const { return code_; }
  std::optional<int> station() const { return station_; }
  const std::string& stage() const { return stage_; }
  const std::string& detail() const { return detail_; }

  // Copy of this error tagged with the pipeline stage that raised it.
  SmoothingError WithStage(const std::string& stage) const;

 private:
  static std::string Compose(ErrorCode code, const std::string& message,
                             std::optional<int> station,
                             const std::string& stage);

  ErrorCode code_;
  std::optional<int> station_;
  std::string stage_;
  std::string detail_;
};

}  // namespace dubins_smooth

#endif  // DUBINS_SMOOTH_ERROR_H_
