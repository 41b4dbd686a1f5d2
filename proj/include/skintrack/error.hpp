#pragma once

#include <stdexcept>
#include <string>

namespace skintrack {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file (PPM header, CSV row, ...).
class ParseError : public Error {
public:
    using Error::Error;
};

/// A parameter or dataset that violates an operation's preconditions.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Model document that does not match the model schema.
class SchemaError : public Error {
public:
    SchemaError(std::string field, const std::string& what)
        : Error("model field '" + field + "': " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

} // namespace skintrack
