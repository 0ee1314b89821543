#pragma once

#include <stdexcept>
#include <string>

namespace pdmpstop {

// Error taxonomy mirrors the CLI exit codes: config=2, numeric=3, io=4.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
    virtual int exit_code() const { return 3; }
};

class ConfigError : public Error {
public:
    using Error::Error;
    int exit_code() const override { return 2; }
};

class IoError : public Error {
public:
    using Error::Error;
    int exit_code() const override { return 4; }
};

class NumericError : public Error {
public:
    using Error::Error;
};

// Raised when an operator is queried on a quantization class that no
// simulated chain ever visited (no transition row available).
class AbsentRowError : public NumericError {
public:
    using NumericError::NumericError;
};

class UnsupportedModelError : public NumericError {
public:
    using NumericError::NumericError;
};

}  // namespace pdmpstop
