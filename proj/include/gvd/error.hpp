#pragma once

#include <stdexcept>
#include <string>

namespace gvd {

enum class ErrorKind { InvalidInput, Degenerate, Internal };

// Exit code mapping used by the CLI: 2, 3, 4.
class GvdError : public std::runtime_error {
public:
    GvdError(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }
    int exit_code() const noexcept {
        switch (kind_) {
        case ErrorKind::InvalidInput: return 2;
        case ErrorKind::Degenerate: return 3;
        case ErrorKind::Internal: return 4;
        }
        return 4;
    }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail_input(const std::string& msg) { throw GvdError(ErrorKind::InvalidInput, msg); }
[[noreturn]] inline void fail_degenerate(const std::string& msg) { throw GvdError(ErrorKind::Degenerate, msg); }
[[noreturn]] inline void fail_internal(const std::string& msg) { throw GvdError(ErrorKind::Internal, msg); }

}  // namespace gvd
