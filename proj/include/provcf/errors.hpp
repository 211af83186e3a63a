#pragma once

#include <stdexcept>
#include <string>

namespace provcf {

// Error taxonomy maps onto CLI exit codes: usage=1, data=2, contract=3.

// Bad invocation: unknown flags, missing arguments.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Unusable input data: malformed files, inconsistent sidecars.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// API misuse or violated precondition; a bug in the caller, not the data.
struct ContractError : std::logic_error {
    using std::logic_error::logic_error;
};

// Dimension mismatch in a numeric primitive. Message names the primitive.
struct ShapeError : ContractError {
    using ContractError::ContractError;
};

inline ShapeError shape_error(const std::string& primitive, const std::string& detail) {
    return ShapeError(primitive + ": " + detail);
}

} // namespace provcf
