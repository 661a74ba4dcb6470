#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace motprobe {

enum class ErrorKind {
    InvalidInput,
    InvalidGeometry,
    InvalidSchedule,
    InvalidRate,
    DegenerateData,
    InvalidData,
    NoConvergence,
    EmptySegment,
    ConfigParse,
    Validation,
    Io,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries a kind so the CLI can map it
// onto an exit status without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, what);
}

inline void require(bool cond, ErrorKind kind, const std::string& what) {
    if (!cond) {
        throw Error(kind, what);
    }
}

}  // namespace motprobe
