#pragma once

#include <stdexcept>
#include <string>

namespace sdlab {

// An integral whose tail does not decay: the declared regularity
// hypothesis is violated.
struct DivergenceError : std::runtime_error {
    explicit DivergenceError(const std::string& what) : std::runtime_error(what) {}
};

struct BudgetExceededError : std::runtime_error {
    explicit BudgetExceededError(const std::string& what) : std::runtime_error(what) {}
};

struct InconsistentSpecError : std::runtime_error {
    explicit InconsistentSpecError(const std::string& what) : std::runtime_error(what) {}
};

struct DegenerateFitError : std::runtime_error {
    explicit DegenerateFitError(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct CacheCorruptionError : std::runtime_error {
    explicit CacheCorruptionError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace sdlab
