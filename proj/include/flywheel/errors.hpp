#pragma once

#include <stdexcept>
#include <string>

namespace flywheel {

/// Raised when parameters, profiles, or CLI inputs violate a model invariant.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised on unreadable inputs or unwritable outputs.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a numerical routine cannot reach its requested tolerance.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace flywheel
