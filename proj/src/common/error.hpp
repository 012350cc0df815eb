#pragma once

#include <stdexcept>
#include <string>

namespace kplug {

// Single exception type for all library-level failures. `kind` is a short
// machine-readable tag ("shape", "contract", "config", "data", "io", ...)
// that the CLI maps onto exit codes.
struct Error : std::runtime_error {
    std::string kind;

    Error(std::string k, const std::string& msg)
        : std::runtime_error(k + " error: " + msg), kind(std::move(k)) {}
};

[[noreturn]] inline void fail(const std::string& kind, const std::string& msg) {
    throw Error(kind, msg);
}

inline void require(bool cond, const std::string& kind, const std::string& msg) {
    if (!cond) fail(kind, msg);
}

} // namespace kplug
