#pragma once

#include <stdexcept>
#include <string>

namespace alphaseed {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input data (bad label, bad feature list, unreadable file).
class ParseError : public Error {
public:
    using Error::Error;
};

// Invalid configuration: bad k, unknown strategy, non-positive C/gamma.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Alpha vector violates the box or equality constraints, or an
// adjustment target is unreachable.
class FeasibilityError : public Error {
public:
    using Error::Error;
};

// Non-finite values where finite ones are required.
class NumericError : public Error {
public:
    using Error::Error;
};

// Instance id outside the dataset.
class IndexError : public Error {
public:
    using Error::Error;
};

// Operation applied to a state that cannot support it (e.g. empty active set).
class StateError : public Error {
public:
    using Error::Error;
};

} // namespace alphaseed
