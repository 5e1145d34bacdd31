// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "nlswag/boxcar.hpp"
#include "nlswag/eval.hpp"
#include "nlswag/simulate.hpp"
#include "support/test_util.hpp"

using namespace nlswag;

TEST_CASE("boxcar basics") {
    SUBCASE("k = 1 is the identity") {
        SlcPair pair = testutil::random_speckle_pair({8, 8}, 0.5, 3);
        EstimateBundle out = boxcar(pair, 1);
        for (int r = 0; r < 8; ++r)
            for (int c = 0; c < 8; ++c) {
                const cpx z = pair.master.at(r, c) * std::conj(pair.slave.at(r, c));
                CHECK(out.phase.at(r, c) == doctest::Approx(std::arg(z)).epsilon(1e-12));
                CHECK(out.coherence.at(r, c) == doctest::Approx(1.0).epsilon(1e-12));
                CHECK(out.enl.at(r, c) == 1.0);
            }
    }
    SUBCASE("constant noise-free scene") {
        SlcPair pair{ComplexRaster({9, 9}, std::polar(2.0, 0.8)), ComplexRaster({9, 9}, cpx(2.0, 0.0))};
        EstimateBundle out = boxcar(pair, 5);
        for (int r = 0; r < 9; ++r)
            for (int c = 0; c < 9; ++c) {
                CHECK(out.phase.at(r, c) == doctest::Approx(0.8).epsilon(1e-12));
                CHECK(out.coherence.at(r, c) == doctest::Approx(1.0).epsilon(1e-12));
            }
        CHECK(out.enl.at(4, 4) == 25.0);
        CHECK(out.enl.at(0, 0) == 9.0);  // clipped corner window
    }
    SUBCASE("even k is rejected") {
        SlcPair pair = testutil::random_speckle_pair({4, 4}, 0.5, 5);
        CHECK_THROWS_AS(boxcar(pair, 4), ConfigError);
        CHECK_THROWS_AS(boxcar(pair, 0), ConfigError);
    }
    SUBCASE("coherence stays in [0, 1] on random data") {
        SlcPair pair = testutil::random_speckle_pair({32, 32}, 0.3, 7);
        EstimateBundle out = boxcar(pair, 5);
        for (double v : out.coherence.values()) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
}

TEST_CASE("boxcar has no linear-phase bias away from borders") {
    // deterministic unit-amplitude SLCs carrying a pure phase ramp
    SceneSpec scene = make_ramp({32, 32}, 0.4, -0.2, 1.0, 1.0);
    SlcPair pair{ComplexRaster({32, 32}), ComplexRaster({32, 32}, cpx(1.0, 0.0))};
    for (int r = 0; r < 32; ++r)
        for (int c = 0; c < 32; ++c) pair.master.at(r, c) = std::polar(1.0, scene.true_phase.at(r, c));
    EstimateBundle out = boxcar(pair, 5);
    for (int r = 2; r < 30; ++r)
        for (int c = 2; c < 30; ++c)
            CHECK(std::abs(wrap_phase(out.phase.at(r, c) - scene.true_phase.at(r, c))) < 1e-9);
}

TEST_CASE("boxcar phase noise at coherence 0.7 matches the reference value") {
    // 5x5 multilook of gamma=0.7 speckle: phase std ~ 0.1482 rad
    SceneSpec scene = make_ramp({96, 96}, 0.0, 0.0, 0.7, 1.0);
    CircularAccumulator acc(scene.true_phase);
    for (int t = 0; t < 60; ++t) {
        SlcPair pair = sample_slc_pair(scene, {11, std::uint32_t(t)});
        acc.add(boxcar(pair, 5).phase);
    }
    TrialStats st = acc.finish();
    double interior = 0.0;
    int n = 0;
    for (int r = 8; r < 88; ++r)
        for (int c = 8; c < 88; ++c) {
            interior += st.std.at(r, c);
            ++n;
        }
    interior /= n;
    CHECK(interior == doctest::Approx(0.1482).epsilon(0.15));
}
