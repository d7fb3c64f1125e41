#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ldgf {

/// Machine-readable failure categories shared by every module and surfaced
/// by the CLI in its error JSON.
enum class ErrorCode {
    invalid_argument,
    domain_exit,
    widen_bound,
    nonconvergent,
    runaway_jump,
    inadmissible_curve,
    degenerate_plateau,
    low_statistics,
    too_few_transitions,
    config_invalid,
    io_error,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

inline void require(bool cond, const std::string& what) {
    if (!cond) {
        fail(ErrorCode::invalid_argument, what);
    }
}

}  // namespace ldgf
