#include "cdsp/error.hpp"

namespace cdsp {

const char* errorName(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DegreeZero: return "DegreeZero";
    case ErrorCode::PolesNotDistinct: return "PolesNotDistinct";
    case ErrorCode::DegreeTooLarge: return "DegreeTooLarge";
    case ErrorCode::NotPositiveOnCircle: return "NotPositiveOnCircle";
    case ErrorCode::RootOnCircle: return "RootOnCircle";
    case ErrorCode::EmptyMeasure: return "EmptyMeasure";
    case ErrorCode::AtomsNotDistinct: return "AtomsNotDistinct";
    case ErrorCode::NotUnimodular: return "NotUnimodular";
    case ErrorCode::GramSingular: return "GramSingular";
    case ErrorCode::EtaNotPSD: return "EtaNotPSD";
    case ErrorCode::NotSchur: return "NotSchur";
    case ErrorCode::ExtremePoint: return "ExtremePoint";
    case ErrorCode::GridOutsideDisc: return "GridOutsideDisc";
    case ErrorCode::InsufficientRows: return "InsufficientRows";
    case ErrorCode::InsufficientLength: return "InsufficientLength";
    case ErrorCode::InputSchema: return "InputSchema";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(errorName(code)) + ": " + message), code_(code), detail_(message) {}

}  // namespace cdsp
