#pragma once

#include <stdexcept>
#include <string>

namespace eifg {

/// Base class for all errors raised by the solver library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid grid sizes, mismatched shapes or bad parameters.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Non-finite input data or out-of-domain arguments.
class NumericError : public Error {
public:
    using Error::Error;
};

/// An explicit step produced a non-finite or runaway stage value.
class BlowUpError : public NumericError {
public:
    BlowUpError(long step, double max_magnitude, const std::string& what)
        : NumericError(what), step_(step), max_magnitude_(max_magnitude) {}

    long step() const noexcept { return step_; }
    double max_magnitude() const noexcept { return max_magnitude_; }

private:
    long step_;
    double max_magnitude_;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace eifg
