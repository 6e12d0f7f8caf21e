#pragma once

#include <stdexcept>
#include <string>

namespace shellrg {

/// Violation of a documented precondition (caller bug).
struct ContractViolation : std::logic_error {
    explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

/// Malformed or inconsistent experiment configuration.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Runtime evaluation failure (e.g. tabulated boundary queried outside its horizon).
struct EvaluationError : std::runtime_error {
    explicit EvaluationError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace shellrg
