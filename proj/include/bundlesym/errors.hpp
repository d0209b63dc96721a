#pragma once

#include <stdexcept>
#include <string>

namespace bundlesym {

enum class ErrorCode {
    AngleOutOfRange,
    BasePointMismatch,
    ReferenceMismatch,
    SingularBasePart,
    ZeroScale,
    NotFibrewiseLinear,
    DegenerateForm,
    NotFixedPoint,
    InvalidArgument,
    ParseError,
    UnknownSuite,
    UnresolvedReference,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline const char* to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::AngleOutOfRange: return "AngleOutOfRange";
    case ErrorCode::BasePointMismatch: return "BasePointMismatch";
    case ErrorCode::ReferenceMismatch: return "ReferenceMismatch";
    case ErrorCode::SingularBasePart: return "SingularBasePart";
    case ErrorCode::ZeroScale: return "ZeroScale";
    case ErrorCode::NotFibrewiseLinear: return "NotFibrewiseLinear";
    case ErrorCode::DegenerateForm: return "DegenerateForm";
    case ErrorCode::NotFixedPoint: return "NotFixedPoint";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownSuite: return "UnknownSuite";
    case ErrorCode::UnresolvedReference: return "UnresolvedReference";
    }
    return "Unknown";
}

} // namespace bundlesym
