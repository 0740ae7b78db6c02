#pragma once

#include <stdexcept>
#include <string>

namespace miw {

/// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Ensemble too small for the requested operation.
class SizeError : public Error {
public:
    using Error::Error;
};

/// Malformed or inconsistent configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A denominator vanished (coincident worlds, zero stencil gap, ...).
/// world_index is 1-based; 0 means "not tied to a specific world".
class SingularityError : public Error {
public:
    SingularityError(const std::string& msg, int world_index = 0)
        : Error(msg), world_index(world_index) {}
    int world_index;
};

/// A linear system had no unique solution.
class SingularSystemError : public Error {
public:
    using Error::Error;
};

/// A fitted density came out non-positive at a world position.
class NonpositiveDensityError : public Error {
public:
    NonpositiveDensityError(const std::string& msg, int world_index = 0)
        : Error(msg), world_index(world_index) {}
    int world_index;
};

/// World ordering was violated during a time step: worlds lower_world and
/// lower_world+1 (1-based) crossed. Treated as a physical event, not a bug.
class CollapseError : public Error {
public:
    CollapseError(const std::string& msg, long long step, int lower_world)
        : Error(msg), step(step), lower_world(lower_world) {}
    long long step;
    int lower_world;
};

}  // namespace miw
