#include "stressdetect/error.hpp"

namespace stressdetect {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kMissingColumn: return "MissingColumn";
    case ErrorCode::kBadLabel: return "BadLabel";
    case ErrorCode::kBadDate: return "BadDate";
    case ErrorCode::kBadScore: return "BadScore";
    case ErrorCode::kBadRow: return "BadRow";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kSingleClassCorpus: return "SingleClassCorpus";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kVersionMismatch: return "VersionMismatch";
    case ErrorCode::kCorruptFile: return "CorruptFile";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kTooFewScores: return "TooFewScores";
    case ErrorCode::kAllExcluded: return "AllExcluded";
    case ErrorCode::kEmptyItem: return "EmptyItem";
    case ErrorCode::kNoValidItems: return "NoValidItems";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

namespace {

std::string decorate(ErrorCode code, const std::string& message, std::size_t row) {
  std::string out(to_string(code));
  if (row != 0) {
    out += " (row " + std::to_string(row) + ")";
  }
  out += ": ";
  out += message;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message, std::size_t row)
    : std::runtime_error(decorate(code, message, row)), code_(code), row_(row) {}

}  // namespace stressdetect
