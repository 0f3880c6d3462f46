#ifndef EAMCR_ERRORS_HPP
#define EAMCR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace eamcr {

// Stable failure categories; mirrored one-to-one by the C API status codes.
enum class ErrorCode {
    IoError = 1,
    ParseError = 2,
    ValidationError = 3,
    DomainError = 4,
    UnknownTask = 5,
    NoCandidates = 6,
    UnknownModel = 7,
    DimensionMismatch = 8,
    EmptyInput = 9,
    InfeasibleScenario = 10,
    UsageError = 11,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace eamcr

#endif
