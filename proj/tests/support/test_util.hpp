// SPDX-License-Identifier: Apache-2.0

#ifndef NLSWAG_TESTS_TEST_UTIL_HPP
#define NLSWAG_TESTS_TEST_UTIL_HPP

#include <cmath>
#include <random>

#include "nlswag/grid.hpp"
#include "nlswag/simulate.hpp"

namespace nlswag::testutil {

inline SlcPair random_speckle_pair(GridShape shape, double coherence, std::uint64_t seed,
                                   double amplitude = 1.0) {
    SceneSpec scene = make_ramp(shape, 0.0, 0.0, coherence, amplitude);
    return sample_slc_pair(scene, SimSeed{seed, 0});
}

inline double rel_diff(double a, double b) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-30});
    return std::abs(a - b) / scale;
}

// Relative comparison used by the oracle-equivalence suites: absolute
// agreement below `floor` also counts (phases near +-0 etc).
inline bool close(double a, double b, double rel, double floor = 1e-12) {
    return std::abs(a - b) <= floor || rel_diff(a, b) <= rel;
}

inline double max_raster_rel_diff(const RealRaster& a, const RealRaster& b, double floor = 1e-12) {
    double worst = 0.0;
    for (size_t i = 0; i < a.values().size(); ++i) {
        const double d = std::abs(a.values()[i] - b.values()[i]);
        if (d <= floor) continue;
        worst = std::max(worst, rel_diff(a.values()[i], b.values()[i]));
    }
    return worst;
}

}  // namespace nlswag::testutil

#endif
