#ifndef EISIM_ERRORS_HPP
#define EISIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace eisim {

// Bad configuration: malformed files, unknown units, invalid flag combinations.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// File-system level failures (missing file, unwritable output directory).
struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// A request could not be served under the current deployment with fallback disabled.
struct UnservedError : std::runtime_error {
    explicit UnservedError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace eisim

#endif
