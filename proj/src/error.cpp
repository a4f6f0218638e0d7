#include "isospec/error.hpp"

namespace isospec {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::NotSkewHermitian: return "NotSkewHermitian";
        case ErrorCode::NotTraceless: return "NotTraceless";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::SingularInput: return "SingularInput";
        case ErrorCode::NonRealResult: return "NonRealResult";
        case ErrorCode::SpectraDiffer: return "SpectraDiffer";
        case ErrorCode::DegenerateAlignmentFailed: return "DegenerateAlignmentFailed";
        case ErrorCode::ContinuationDiverged: return "ContinuationDiverged";
        case ErrorCode::InvalidParams: return "InvalidParams";
        case ErrorCode::NotOnSphere: return "NotOnSphere";
        case ErrorCode::NotTangent: return "NotTangent";
        case ErrorCode::NotUnitScalar: return "NotUnitScalar";
        case ErrorCode::BasePointMismatch: return "BasePointMismatch";
        case ErrorCode::DegenerateFrame: return "DegenerateFrame";
        case ErrorCode::SingularPoint: return "SingularPoint";
        case ErrorCode::DomainError: return "DomainError";
        case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
        case ErrorCode::StepTooLarge: return "StepTooLarge";
        case ErrorCode::SchemaError: return "SchemaError";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message, double residual)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      residual_(residual) {}

}  // namespace isospec
