#pragma once

#include <stdexcept>
#include <string>

namespace ctkit {

// Invalid or inconsistent run configuration (CLI exit code 1).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// A computation produced a non-finite value (CLI exit code 2).
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// File system / serialization failure (CLI exit code 3).
struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace ctkit
