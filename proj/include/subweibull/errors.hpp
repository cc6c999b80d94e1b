#pragma once

#include <stdexcept>
#include <string>

namespace subweibull {

// Argument errors use std::invalid_argument, domain errors std::domain_error.

struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SingularityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnsupportedRangeError : std::domain_error {
    using std::domain_error::domain_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised by experiments when a checked property fails; maps to exit code 3.
struct InvariantViolation : std::runtime_error {
    InvariantViolation(std::string name, const std::string& detail)
        : std::runtime_error(name + ": " + detail), invariant(std::move(name)) {}
    std::string invariant;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace subweibull
