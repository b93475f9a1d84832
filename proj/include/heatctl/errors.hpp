#pragma once

#include <stdexcept>
#include <string>

namespace heatctl {

// Invalid or inconsistent user configuration (CLI exit code 4).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Failure inside a numerical kernel: indefinite factorization, Newton
// stagnation, non-finite values (CLI exit code 5).
class SolverError : public std::runtime_error {
public:
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace heatctl
