#pragma once

#include <stdexcept>
#include <string>

namespace laundergraph {

// Base for every failure raised by the library. Precondition violations on
// pure functions use std::invalid_argument instead.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class FormatError : public Error {
public:
    using Error::Error;
};

class ChecksumError : public FormatError {
public:
    using FormatError::FormatError;
};

class VersionError : public FormatError {
public:
    using FormatError::FormatError;
};

class SchemaMismatchError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double final_delta)
        : Error(what), final_delta_(final_delta) {}

    double final_delta() const noexcept { return final_delta_; }

private:
    double final_delta_;
};

}  // namespace laundergraph
