/**
 * @file error.hpp
 * @brief Error type shared by every isospec module.
 */
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace isospec {

enum class ErrorCode {
    NotSkewHermitian,
    NotTraceless,
    DimensionMismatch,
    SingularInput,
    NonRealResult,
    SpectraDiffer,
    DegenerateAlignmentFailed,
    ContinuationDiverged,
    InvalidParams,
    NotOnSphere,
    NotTangent,
    NotUnitScalar,
    BasePointMismatch,
    DegenerateFrame,
    SingularPoint,
    DomainError,
    NotPositiveDefinite,
    StepTooLarge,
    SchemaError,
    IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Exception carrying a machine-checkable code and, where meaningful, the
/// offending residual.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, double residual = 0.0);

    ErrorCode code() const noexcept { return code_; }
    double residual() const noexcept { return residual_; }

private:
    ErrorCode code_;
    double residual_;
};

}  // namespace isospec
