#pragma once

#include <stdexcept>
#include <string>

namespace nr {

// Refusals from cost/size guards; the CLI maps these to exit code 3.
struct resource_error : std::runtime_error {
    explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid run configuration (unknown keys, bad values, parse failures);
// the CLI maps these to exit code 2.
struct config_error : std::runtime_error {
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nr
