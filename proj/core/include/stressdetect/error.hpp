#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace stressdetect {

enum class ErrorCode {
  kIo,
  kMissingColumn,
  kBadLabel,
  kBadDate,
  kBadScore,
  kBadRow,
  kEmptyCorpus,
  kSingleClassCorpus,
  kDimensionMismatch,
  kVersionMismatch,
  kCorruptFile,
  kLengthMismatch,
  kEmptyInput,
  kTooFewScores,
  kAllExcluded,
  kEmptyItem,
  kNoValidItems,
  kInvalidArgument,
};

std::string_view to_string(ErrorCode code);

// Every recoverable failure in the library is reported as an Error carrying a
// machine-readable code. Data errors tied to an input row set `row()` (1-based,
// header is row 1; 0 when not applicable).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::size_t row = 0);

  ErrorCode code() const noexcept { return code_; }
  std::size_t row() const noexcept { return row_; }

 private:
  ErrorCode code_;
  std::size_t row_;
};

}  // namespace stressdetect
