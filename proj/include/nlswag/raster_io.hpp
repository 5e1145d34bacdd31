// SPDX-License-Identifier: Apache-2.0

#ifndef NLSWAG_RASTER_IO_HPP
#define NLSWAG_RASTER_IO_HPP

#include <string>
#include <variant>

#include "nlswag/grid.hpp"

namespace nlswag {

// On-disk raster format, version 1:
//   <base>.bin   flat little-endian payload, row-major
//   <base>.json  sidecar {"rows", "cols", "dtype": "c64"|"f32", "semantic", "version": 1}
// "c64" stores two little-endian float32 per pixel (real then imaginary),
// "f32" one float32.  Payload length must equal rows*cols*(8 | 4) bytes.
//
// All read/write functions take the extension-free base path.

void write_raster(const ComplexRaster& r, const std::string& base);
void write_raster(const RealRaster& r, const std::string& base);

using AnyRaster = std::variant<ComplexRaster, RealRaster>;

// Reads either kind; dtype comes from the sidecar.  With validate=true,
// real rasters are range-checked against their semantic.  Values must be
// finite in all cases.
AnyRaster read_raster(const std::string& base, bool validate = false);

ComplexRaster read_complex_raster(const std::string& base, bool validate = false);
RealRaster read_real_raster(const std::string& base, bool validate = false);

}  // namespace nlswag

#endif
