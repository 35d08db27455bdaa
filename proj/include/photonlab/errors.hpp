#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace photonlab {

/// Error with a short machine-readable code ("invalid-parameter", ...) plus a
/// human-readable message. The CLI prints these as `error: <code>: <message>`.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const { return code_; }

private:
    std::string code_;
};

[[noreturn]] inline void fail(const std::string& code, const std::string& message) {
    throw Error(code, message);
}

inline void require(bool cond, const std::string& code, const std::string& message) {
    if (!cond) fail(code, message);
}

}  // namespace photonlab
