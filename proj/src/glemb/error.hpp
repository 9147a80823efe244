#pragma once

#include <stdexcept>
#include <string>

namespace glemb {

// Mirrors glemb_status in the C header; values must stay in sync.
enum class ErrorCode : int {
    InvalidArgument = 1,
    Io = 2,
    Parse = 3,
    EmptyInput = 4,
    Numerical = 5,
    Unsupported = 6,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

} // namespace glemb
