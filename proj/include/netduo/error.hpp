#pragma once

#include <stdexcept>
#include <string>

namespace netduo {

enum class ErrorCode {
    InvalidArgument,
    DegenerateMatrix,
    NotApplicable,
    NoHotellingSelection,
    ClassAbsent,
    OutOfDomain,
    Unbounded,
    SamplingExhausted,
    Io,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace netduo
