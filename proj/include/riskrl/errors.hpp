#pragma once

#include <stdexcept>
#include <string>

namespace riskrl {

// Bad user input: malformed config, invalid parameters, inconsistent shapes.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A computation would leave the representable range of doubles
// (exponential-domain overflow budget exceeded).
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Model tables that fail validation.
class InvalidMdp : public ConfigError {
public:
    using ConfigError::ConfigError;
};

} // namespace riskrl
