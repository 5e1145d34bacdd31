// SPDX-License-Identifier: Apache-2.0

#ifndef NLSWAG_INTERFEROGRAM_HPP
#define NLSWAG_INTERFEROGRAM_HPP

#include "nlswag/grid.hpp"

namespace nlswag {

// z = u1 * conj(u2), pixel-wise.
inline ComplexRaster form_interferogram(const SlcPair& pair) {
    pair.require_consistent();
    ComplexRaster z(pair.shape());
    const auto& m = pair.master.values();
    const auto& s = pair.slave.values();
    auto& v = z.values();
    for (size_t i = 0; i < v.size(); ++i) v[i] = m[i] * std::conj(s[i]);
    return z;
}

// Mean intensity (|u1|^2 + |u2|^2) / 2, pixel-wise.
inline RealRaster mean_intensity(const SlcPair& pair) {
    pair.require_consistent();
    RealRaster out(pair.shape(), Semantic::Intensity);
    const auto& m = pair.master.values();
    const auto& s = pair.slave.values();
    auto& v = out.values();
    for (size_t i = 0; i < v.size(); ++i) v[i] = 0.5 * (std::norm(m[i]) + std::norm(s[i]));
    return out;
}

}  // namespace nlswag

#endif
