#pragma once

#include <stdexcept>
#include <string>

namespace fdspec {

// Base class for all toolkit failures. Subclasses map onto CLI exit codes.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid parameters or configuration (CLI exit 2).
struct ParamError : Error {
    using Error::Error;
};

// Requested resolution cannot represent the problem (overflow risk, boundary
// dominance violated). Message carries a suggested remedy. (CLI exit 4.)
struct ResolutionError : Error {
    using Error::Error;
};

// A quantity was requested outside the range where the underlying data is
// trusted, e.g. lambda beyond the certified part of a spectrum. (CLI exit 4.)
struct RangeError : Error {
    using Error::Error;
};

// Numerical routine failed to converge or produced invalid output (CLI exit 4).
struct NumericError : Error {
    using Error::Error;
};

} // namespace fdspec
