// SPDX-License-Identifier: Apache-2.0

#ifndef NLSWAG_ERRORS_HPP
#define NLSWAG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace nlswag {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// File does not exist or cannot be opened.  CLI exit code 2.
struct MissingFileError : Error {
    using Error::Error;
};

// Invalid configuration value or flag combination.  CLI exit code 3.
struct ConfigError : Error {
    using Error::Error;
};

// Raster shapes do not agree.  CLI exit code 4.
struct ShapeError : Error {
    using Error::Error;
};

// Sidecar header is syntactically or structurally invalid.
struct FormatError : Error {
    using Error::Error;
};

// Payload length does not match rows*cols*bytes-per-pixel.
struct PayloadSizeError : Error {
    using Error::Error;
};

// Header names a dtype this format does not define.
struct DtypeError : Error {
    using Error::Error;
};

// A value violates the range implied by the raster semantic.
struct RangeError : Error {
    using Error::Error;
};

// Operation preconditions violated (bad argument values).
struct ValueError : Error {
    using Error::Error;
};

}  // namespace nlswag

#endif
