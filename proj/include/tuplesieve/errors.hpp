#pragma once

#include <stdexcept>
#include <string>

namespace tuplesieve {

struct resource_limit_error : std::runtime_error {
    explicit resource_limit_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct numeric_failure : std::runtime_error {
    explicit numeric_failure(const std::string& msg) : std::runtime_error(msg) {}
};

struct bracket_error : std::runtime_error {
    explicit bracket_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct degenerate_weight_error : std::runtime_error {
    explicit degenerate_weight_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace tuplesieve
