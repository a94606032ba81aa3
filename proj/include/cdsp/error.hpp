#pragma once

#include <stdexcept>
#include <string>

namespace cdsp {

// Numeric values are shared with cdsp_status in cdsp.h.
enum class ErrorCode : int {
  InvalidArgument = 1,
  DegreeZero = 2,
  PolesNotDistinct = 3,
  DegreeTooLarge = 4,
  NotPositiveOnCircle = 5,
  RootOnCircle = 6,
  EmptyMeasure = 7,
  AtomsNotDistinct = 8,
  NotUnimodular = 9,
  GramSingular = 10,
  EtaNotPSD = 11,
  NotSchur = 12,
  ExtremePoint = 13,
  GridOutsideDisc = 14,
  InsufficientRows = 15,
  InsufficientLength = 16,
  InputSchema = 17,
  Internal = 18,
};

const char* errorName(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  /// message without the code-name prefix
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace cdsp
