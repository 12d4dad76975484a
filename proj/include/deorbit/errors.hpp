#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace deorbit {

/// Input outside the mathematical domain of an operation (zero vector, zero denominator).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Malformed or inconsistent data (duplicate timestamps, unbalanced designs, short records).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Configuration or rating value that violates its declared range.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Operation not permitted in the current trial/session phase.
class StateError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Telemetry log failed verification. `index` is the zero-based line of the log.
class IntegrityError : public std::runtime_error {
public:
    IntegrityError(std::size_t index, const std::string& what)
        : std::runtime_error("log line " + std::to_string(index + 1) + ": " + what), index_(index) {}

    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

}  // namespace deorbit
