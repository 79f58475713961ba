#pragma once

#include <stdexcept>
#include <string>

namespace rome {

// Shape disagreement between operands (e.g. matmul inner dims).
struct DimensionError : std::runtime_error {
    explicit DimensionError(const std::string& msg) : std::runtime_error(msg) {}
};

// NaN/Inf produced, log of nonpositive, division by ~0, degenerate simplex.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// API misuse: backward on non-scalar, version/params mismatch, epoch out of range.
struct ContractError : std::logic_error {
    explicit ContractError(const std::string& msg) : std::logic_error(msg) {}
};

// Bad user-supplied configuration (unknown keys, invalid dataset spec).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace rome
