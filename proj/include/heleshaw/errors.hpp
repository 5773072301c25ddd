#pragma once

#include <stdexcept>
#include <string>

namespace heleshaw {

/// Iterative solver failed to reach its tolerance (CG divergence, SOR cap, ...).
struct SolverError : std::runtime_error {
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

/// Time-step stability constraint violated.
struct StabilityError : std::runtime_error {
    explicit StabilityError(const std::string& what) : std::runtime_error(what) {}
};

/// Config file could not be parsed.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace heleshaw
