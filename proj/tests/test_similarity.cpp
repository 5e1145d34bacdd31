// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "nlswag/filter.hpp"
#include "nlswag/rng.hpp"
#include "nlswag/similarity.hpp"
#include "nlswag/simulate.hpp"
#include "support/test_util.hpp"

using namespace nlswag;

namespace {

cpx rand_cpx(std::uint64_t seed, int i, int k) {
    auto n = site_normals(seed, std::uint32_t(i), std::uint32_t(k), 0, 0);
    return {n[0], n[1]};
}

}  // namespace

TEST_CASE("delta1 pixel similarity") {
    SUBCASE("symmetric under pixel exchange") {
        for (int i = 0; i < 50; ++i) {
            cpx a = rand_cpx(1, i, 0), b = rand_cpx(1, i, 1);
            cpx c = rand_cpx(1, i, 2), d = rand_cpx(1, i, 3);
            CHECK(neg_log_delta1(a, b, c, d) == doctest::Approx(neg_log_delta1(c, d, a, b)).epsilon(1e-12));
        }
    }
    SUBCASE("identical unit pixels hit the C -> A clamp and stay finite") {
        const cpx u(1.0, 0.0);
        const double v = delta1_pixel(u, u, u, u);
        CHECK(std::isfinite(v));
        // at the clamp, C = A(1-1e-12): the bracket is dominated by
        // 2*sqrt((1-eps)/eps) and the likelihood is very large
        CHECK(v > 1e4);
        CHECK(std::isfinite(neg_log_delta1(u, u, u, u)));
        CHECK(neg_log_delta1(u, u, u, u) < 0.0);
    }
    SUBCASE("opposite phases drive C to the lower clamp") {
        // u1x=u2x=1 (z_x = 1), u1y=e^{j pi}, u2y=1 (z_y = -1):
        // C = 4|z_x+z_y|^2 = 0 before clamping, A = 16, B = 1.
        const double A = 16.0, C = 1e-12;
        const double t = 1.0 / C;
        const double rho = C / A;
        // series evaluation of the bracket (rho far below the switch)
        double s = 429.0 / 1088.0;
        const double coef[] = {4.0 / 3.0, 4.0 / 5.0, 9.0 / 14.0, 5.0 / 9.0,
                               175.0 / 352.0, 189.0 / 416.0, 539.0 / 1280.0};
        for (int k = 6; k >= 0; --k) s = s * rho + coef[k];
        const double G = rho * std::sqrt(rho) * s;
        const double expect = -(1.5 * std::log(t) + std::log(G));
        const double got = neg_log_delta1(cpx(1, 0), cpx(1, 0), std::polar(1.0, kPi), cpx(1, 0));
        CHECK(got == doctest::Approx(expect).epsilon(1e-10));
    }
    SUBCASE("all-zero amplitudes throw") {
        CHECK_THROWS_AS(delta1_pixel(cpx(0, 0), cpx(0, 0), cpx(0, 0), cpx(0, 0)), ValueError);
    }
    SUBCASE("series and direct bracket evaluation agree at the switch") {
        // rho just above/below the series switch must agree to ~1e-14
        for (double rho : {3.9e-3, 4.1e-3, 1e-4, 0.05}) {
            const double A = 2.3;
            const double C = rho * A;
            const double direct = (A + C) / A * std::sqrt(C / (A - C)) - std::asin(std::sqrt(C / A));
            double s = 429.0 / 1088.0;
            const double coef[] = {4.0 / 3.0, 4.0 / 5.0, 9.0 / 14.0, 5.0 / 9.0,
                                   175.0 / 352.0, 189.0 / 416.0, 539.0 / 1280.0};
            for (int k = 6; k >= 0; --k) s = s * rho + coef[k];
            const double series = rho * std::sqrt(rho) * s;
            CHECK(series == doctest::Approx(direct).epsilon(1e-12));
        }
    }
}

TEST_CASE("delta2 divergence") {
    SUBCASE("zero iff identical parameters") {
        CHECK(delta2_pixel(1.3, 0.6, 0.4, 1.3, 0.6, 0.4) == doctest::Approx(0.0));
        CHECK(delta2_pixel(1.0, 0.5, 0.0, 2.0, 0.5, 0.0) > 0.0);
        CHECK(delta2_pixel(1.0, 0.5, 0.0, 1.0, 0.7, 0.0) > 0.0);
        CHECK(delta2_pixel(1.0, 0.5, 0.0, 1.0, 0.5, 0.5) > 0.0);
    }
    SUBCASE("known value at opposite phases") {
        const double expect = 4.0 / kPi * (2.0 * 1.49 / 0.51 - 2.0);  // ~4.8932
        CHECK(delta2_pixel(2.0, 0.7, 0.3, 2.0, 0.7, 0.3 - kPi) == doctest::Approx(expect).epsilon(1e-12));
        CHECK(expect == doctest::Approx(4.8932).epsilon(1e-4));
    }
    SUBCASE("invariant to common intensity scale and phase offset") {
        const double base = delta2_pixel(1.0, 0.5, 0.2, 3.0, 0.8, 1.0);
        CHECK(delta2_pixel(5.0, 0.5, 0.2 + 0.9, 15.0, 0.8, 1.0 + 0.9) == doctest::Approx(base).epsilon(1e-12));
    }
    SUBCASE("symmetry") {
        CHECK(delta2_pixel(1.0, 0.5, 0.2, 3.0, 0.8, 1.0) ==
              doctest::Approx(delta2_pixel(3.0, 0.8, 1.0, 1.0, 0.5, 0.2)).epsilon(1e-12));
    }
    SUBCASE("monotone in |phase difference| on [0, pi]") {
        double prev = -1.0;
        for (int i = 0; i <= 20; ++i) {
            const double dphi = kPi * i / 20.0;
            const double v = delta2_pixel(1.0, 0.7, 0.0, 1.0, 0.7, dphi);
            CHECK(v >= prev - 1e-12);
            prev = v;
        }
    }
    SUBCASE("non-positive intensity throws") {
        CHECK_THROWS_AS(delta2_pixel(0.0, 0.5, 0.0, 1.0, 0.5, 0.0), ValueError);
    }
}

TEST_CASE("stage-1 patch dissimilarity") {
    SceneSpec scene = make_ramp({12, 12}, 0.0, 0.0, 0.7, 1.0);
    SlcPair pair = sample_slc_pair(scene, {3, 0});

    SUBCASE("self comparison is minimal over the window") {
        const double self = patch_dissim_stage1(pair, 6, 6, 6, 6, PatchGeometry{2});
        for (int dr = -3; dr <= 3; ++dr)
            for (int dc = -3; dc <= 3; ++dc) {
                if (dr == 0 && dc == 0) continue;
                CHECK(self <= patch_dissim_stage1(pair, 6, 6, 6 + dr, 6 + dc, PatchGeometry{2}));
            }
    }
    SUBCASE("1x1 patch reduces to the pixel dissimilarity") {
        const double v = patch_dissim_stage1(pair, 4, 5, 7, 8, PatchGeometry{0});
        const double expect = neg_log_delta1(pair.master.at(4, 5), pair.slave.at(4, 5),
                                             pair.master.at(7, 8), pair.slave.at(7, 8));
        CHECK(v == doctest::Approx(expect).epsilon(1e-12));
    }
    SUBCASE("3x3 on a constant noise-free scene is 9x the single-pixel value") {
        SlcPair flat{ComplexRaster({9, 9}, cpx(1.0, 0.0)), ComplexRaster({9, 9}, cpx(1.0, 0.0))};
        const double single = neg_log_delta1(cpx(1, 0), cpx(1, 0), cpx(1, 0), cpx(1, 0));
        const double patch = patch_dissim_stage1(flat, 4, 4, 4, 5, PatchGeometry{1});
        CHECK(patch == doctest::Approx(9.0 * single).epsilon(1e-12));
    }
    SUBCASE("border clipping rescales to full-patch equivalents") {
        // center at the corner: only a 3x3 quadrant of the 5x5 patch is valid
        const double corner = patch_dissim_stage1(pair, 0, 0, 0, 0, PatchGeometry{2});
        CHECK(std::isfinite(corner));
        double manual = 0.0;
        int valid = 0;
        for (int oa = 0; oa <= 2; ++oa)
            for (int oc = 0; oc <= 2; ++oc) {
                manual += neg_log_delta1(pair.master.at(oa, oc), pair.slave.at(oa, oc),
                                         pair.master.at(oa, oc), pair.slave.at(oa, oc));
                ++valid;
            }
        CHECK(corner == doctest::Approx(manual * 25.0 / valid).epsilon(1e-12));
    }
}

TEST_CASE("stage-2 patch dissimilarity") {
    GridShape shape{16, 16};
    EstimateBundle guide{RealRaster(shape, Semantic::Phase), RealRaster(shape, Semantic::Intensity),
                         RealRaster(shape, Semantic::Coherence), RealRaster(shape, Semantic::Enl)};
    for (int r = 0; r < 16; ++r)
        for (int c = 0; c < 16; ++c) {
            guide.phase.at(r, c) = wrap_phase(0.25 * c);
            guide.intensity.at(r, c) = 1.0 + 0.01 * r;
            guide.coherence.at(r, c) = 0.7;
            guide.enl.at(r, c) = 10.0;
        }

    SUBCASE("self dissimilarity is zero") {
        CHECK(patch_dissim_stage2(guide, 8, 8, 8, 8, GaussianWindow{2.0, 2}) ==
              doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("uniform window limit is the arithmetic mean") {
        GaussianWindow big{1e9, 1};
        const double v = patch_dissim_stage2(guide, 8, 8, 9, 9, big);
        double mean = 0.0;
        for (int oa = -1; oa <= 1; ++oa)
            for (int oc = -1; oc <= 1; ++oc)
                mean += delta2_pixel(guide.intensity.at(8 + oa, 8 + oc), 0.7, guide.phase.at(8 + oa, 8 + oc),
                                     guide.intensity.at(9 + oa, 9 + oc), 0.7, guide.phase.at(9 + oa, 9 + oc));
        mean /= 9.0;
        CHECK(v == doctest::Approx(mean).epsilon(1e-9));
    }
    SUBCASE("exact fringe compensation cancels a linear ramp") {
        for (auto& v : guide.intensity.values()) v = 1.0;
        FringeField fringe{RealRaster(shape, Semantic::Frequency, 0.25),
                           RealRaster(shape, Semantic::Frequency, 0.0)};
        for (int yr = 5; yr <= 11; ++yr)
            for (int yc = 5; yc <= 11; ++yc) {
                const double v = patch_dissim_stage2(guide, 8, 8, yr, yc, GaussianWindow{2.0, 2}, &fringe);
                CHECK(std::abs(v) < 1e-9);
            }
    }
}

TEST_CASE("weights from dissimilarities") {
    SUBCASE("equal dissimilarities give uniform weights") {
        std::vector<double> d(7, 3.3);
        auto w = weights_from_dissim(d, 2.0);
        for (double x : w) CHECK(x == doctest::Approx(1.0 / 7.0).epsilon(1e-14));
    }
    SUBCASE("infinite dissimilarity gets zero weight") {
        std::vector<double> d{0.0, std::numeric_limits<double>::infinity()};
        auto w = weights_from_dissim(d, 1.0);
        CHECK(w[0] == doctest::Approx(1.0));
        CHECK(w[1] == 0.0);
    }
    SUBCASE("known two-point kernel") {
        const double h = 1.7, scale = 2.1;
        std::vector<double> d{0.0, h * scale};
        auto w = weights_from_dissim(d, h, scale);
        const double e1 = std::exp(-1.0);
        CHECK(w[0] == doctest::Approx(1.0 / (1.0 + e1)).epsilon(1e-14));
        CHECK(w[1] == doctest::Approx(e1 / (1.0 + e1)).epsilon(1e-14));
    }
    SUBCASE("normalized and non-negative for random inputs") {
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<double> d(31);
            for (int i = 0; i < 31; ++i) {
                auto n = site_normals(50 + trial, std::uint32_t(i), 0, 0, 0);
                d[size_t(i)] = std::abs(n[0]) * 10.0;
            }
            auto w = weights_from_dissim(d, 4.0);
            double s = 0.0;
            for (double x : w) {
                CHECK(x >= 0.0);
                s += x;
            }
            CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
            const double enl = enl_from_weights(w);
            CHECK(enl >= 1.0);
            CHECK(enl <= 31.0 + 1e-9);
        }
    }
    SUBCASE("errors") {
        std::vector<double> d{1.0};
        CHECK_THROWS_AS(weights_from_dissim(d, 0.0), ValueError);
        std::vector<double> inf{std::numeric_limits<double>::infinity()};
        CHECK_THROWS_AS(weights_from_dissim(inf, 1.0), ValueError);
    }
}
