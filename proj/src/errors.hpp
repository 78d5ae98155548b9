#pragma once

#include <stdexcept>

namespace qgossip {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidParameter : Error {
    using Error::Error;
};

// Raised when an exact computation would exceed its enumeration budget.
struct CapacityError : Error {
    using Error::Error;
};

struct DisconnectedGraph : Error {
    using Error::Error;
};

struct ResourceExhausted : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

}  // namespace qgossip
