// Error taxonomy shared by the library and the CLI exit-code mapping.

#ifndef SALSI_ERRORS_HPP
#define SALSI_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace salsi {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Unreadable/malformed files, invalid parameters, out-of-contract values.
struct InputError : Error {
    using Error::Error;
};

// Two grids that must share dimensions do not.
struct ShapeMismatchError : Error {
    using Error::Error;
};

// Data that cannot be processed further (single-level histogram,
// ground truth with only one class, ...).
struct DegenerateDataError : Error {
    using Error::Error;
};

}  // namespace salsi

#endif
