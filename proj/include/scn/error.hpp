#pragma once

#include <stdexcept>
#include <string>

namespace scn {

enum class ErrorCode {
    InvalidArgument,
    InvalidInterval,
    NonConvergence,
    NoBracket,
    NonPositiveDistance,
    NonPositiveLaplaceArg,
    ExponentTooSmall,
    InvalidModel,
    EmptyGrid,
    NumericalInconsistency,
    DegenerateWindow,
    ConfigError,
    IoError,
};

const char* to_string(ErrorCode code) noexcept;

// Single exception type for the library; the code is what callers (and the
// C API) switch on, the message is for humans.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& what) {
    throw Error(code, std::string(to_string(code)) + ": " + what);
}

}  // namespace scn
