#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace indicmt {

// Domain error carrying a stable machine-parsable code ("module.Name").
// The CLI prints "error: <code>: <message>" and exits 1 on these.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

[[noreturn]] inline void raise(const std::string& code, const std::string& message) {
    throw Error(code, message);
}

} // namespace indicmt
