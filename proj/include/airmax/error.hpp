#pragma once

#include <stdexcept>
#include <string>

namespace airmax {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad id, out-of-range value, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A scenario file or JSON document does not satisfy the schema.
/// `field()` names the offending key path, e.g. "channel.scale".
class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& message)
        : Error(field + ": " + message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// The analog receiver produced an unusable pilot energy (gamma' <= 0).
class SnrViolation : public Error {
public:
    using Error::Error;
};

}  // namespace airmax
