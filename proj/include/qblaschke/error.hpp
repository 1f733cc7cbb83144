#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qblaschke {

enum class ErrorCode {
    RealInput,
    BadEpsilon,
    ZeroDivisor,
    InvalidArgument,
    DimensionMismatch,
    NumericalError,
    NotStable,
    DivergenceRisk,
    TruncationInsufficient,
    NodeOutsideBall,
    NotUnimodular,
    PoleHit,
    NoZeroInClass,
    ChainExtractionFailed,
    SimilarInputs,
    SimilarPointsUnsupported,
    NotControllable,
    IllConditioned,
    RankConditionFailed,
    NotPSD,
    NotSaturated,
    NotSchur,
};

constexpr std::string_view error_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::RealInput: return "RealInput";
        case ErrorCode::BadEpsilon: return "BadEpsilon";
        case ErrorCode::ZeroDivisor: return "ZeroDivisor";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::NumericalError: return "NumericalError";
        case ErrorCode::NotStable: return "NotStable";
        case ErrorCode::DivergenceRisk: return "DivergenceRisk";
        case ErrorCode::TruncationInsufficient: return "TruncationInsufficient";
        case ErrorCode::NodeOutsideBall: return "NodeOutsideBall";
        case ErrorCode::NotUnimodular: return "NotUnimodular";
        case ErrorCode::PoleHit: return "PoleHit";
        case ErrorCode::NoZeroInClass: return "NoZeroInClass";
        case ErrorCode::ChainExtractionFailed: return "ChainExtractionFailed";
        case ErrorCode::SimilarInputs: return "SimilarInputs";
        case ErrorCode::SimilarPointsUnsupported: return "SimilarPointsUnsupported";
        case ErrorCode::NotControllable: return "NotControllable";
        case ErrorCode::IllConditioned: return "IllConditioned";
        case ErrorCode::RankConditionFailed: return "RankConditionFailed";
        case ErrorCode::NotPSD: return "NotPSD";
        case ErrorCode::NotSaturated: return "NotSaturated";
        case ErrorCode::NotSchur: return "NotSchur";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string detail)
        : std::runtime_error(std::string(error_name(code)) + ": " + detail),
          code_(code), detail_(std::move(detail)) {}

    ErrorCode code() const noexcept { return code_; }
    std::string_view name() const noexcept { return error_name(code_); }
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    std::string detail_;
};

}  // namespace qblaschke
