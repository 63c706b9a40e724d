#pragma once

#include <stdexcept>
#include <string>

namespace bohm {

/// A configuration or physical input is out of its domain. field() names the
/// offending key.
class ValidationError : public std::invalid_argument {
public:
    ValidationError(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// A correlator cannot be estimated (no events for a setting pair).
class EstimationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace bohm
