#include "scn/error.hpp"

namespace scn {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::InvalidInterval: return "InvalidInterval";
        case ErrorCode::NonConvergence: return "NonConvergence";
        case ErrorCode::NoBracket: return "NoBracket";
        case ErrorCode::NonPositiveDistance: return "NonPositiveDistance";
        case ErrorCode::NonPositiveLaplaceArg: return "NonPositiveLaplaceArg";
        case ErrorCode::ExponentTooSmall: return "ExponentTooSmall";
        case ErrorCode::InvalidModel: return "InvalidModel";
        case ErrorCode::EmptyGrid: return "EmptyGrid";
        case ErrorCode::NumericalInconsistency: return "NumericalInconsistency";
        case ErrorCode::DegenerateWindow: return "DegenerateWindow";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

}  // namespace scn
