#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hdpbench {

enum class ErrorCode {
    MissingLabelColumn,
    NonNumericCell,
    ZeroModules,
    MetricCountMismatch,
    UnknownMetric,
    UnrecognizedLabel,
    MalformedInput,
    InvalidSchema,
    InvalidArgument,
    DimensionMismatch,
    IdMismatch,
    NoDefects,
    DuplicateMethod,
    UnknownMethod,
    InsufficientMethods,
    Io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Exception thrown by every fallible hdpbench operation. The code identifies
/// the failure class; what() carries the human-readable context (file, line,
/// column, ...).
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::MissingLabelColumn: return "MissingLabelColumn";
    case ErrorCode::NonNumericCell: return "NonNumericCell";
    case ErrorCode::ZeroModules: return "ZeroModules";
    case ErrorCode::MetricCountMismatch: return "MetricCountMismatch";
    case ErrorCode::UnknownMetric: return "UnknownMetric";
    case ErrorCode::UnrecognizedLabel: return "UnrecognizedLabel";
    case ErrorCode::MalformedInput: return "MalformedInput";
    case ErrorCode::InvalidSchema: return "InvalidSchema";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::IdMismatch: return "IdMismatch";
    case ErrorCode::NoDefects: return "NoDefects";
    case ErrorCode::DuplicateMethod: return "DuplicateMethod";
    case ErrorCode::UnknownMethod: return "UnknownMethod";
    case ErrorCode::InsufficientMethods: return "InsufficientMethods";
    case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

} // namespace hdpbench
