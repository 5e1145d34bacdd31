// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "nlswag/grid.hpp"
#include "nlswag/interferogram.hpp"
#include "nlswag/raster_io.hpp"
#include "nlswag/rng.hpp"

using namespace nlswag;

namespace {

std::string temp_base(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "nlswag_raster_tests";
    std::filesystem::create_directories(dir);
    return (dir / name).string();
}

std::vector<char> slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE(bool(f));
    return std::vector<char>((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("wrap_phase maps into (-pi, pi]") {
    CHECK(wrap_phase(0.0) == 0.0);
    CHECK(wrap_phase(kPi) == doctest::Approx(kPi));
    CHECK(wrap_phase(-kPi) == doctest::Approx(kPi));
    CHECK(wrap_phase(5.0) == doctest::Approx(5.0 - kTwoPi));
    CHECK(wrap_phase(-7.0) == doctest::Approx(-7.0 + kTwoPi));
    for (int i = -20; i <= 20; ++i) {
        const double w = wrap_phase(0.37 * i);
        CHECK(w > -kPi - 1e-15);
        CHECK(w <= kPi + 1e-15);
    }
}

TEST_CASE("form_interferogram basics") {
    SlcPair pair{ComplexRaster({2, 2}), ComplexRaster({2, 2})};

    SUBCASE("identity") {
        pair.master.at(0, 0) = {1.0, 0.0};
        pair.slave.at(0, 0) = {1.0, 0.0};
        auto z = form_interferogram(pair);
        CHECK(z.at(0, 0) == cpx(1.0, 0.0));
    }
    SUBCASE("unit slave keeps the master phase") {
        pair.master.at(1, 1) = std::polar(1.0, kPi / 2.0);
        pair.slave.at(1, 1) = {1.0, 0.0};
        auto z = form_interferogram(pair);
        CHECK(std::arg(z.at(1, 1)) == doctest::Approx(kPi / 2.0));
    }
    SUBCASE("magnitude is the product of amplitudes") {
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) {
                auto n = site_normals(7, r, c, 0, 0);
                pair.master.at(r, c) = {n[0], n[1]};
                pair.slave.at(r, c) = {n[2], n[3]};
            }
        auto z = form_interferogram(pair);
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) {
                CHECK(std::abs(z.at(r, c)) ==
                      doctest::Approx(std::abs(pair.master.at(r, c)) * std::abs(pair.slave.at(r, c))));
                CHECK(z.at(r, c) == pair.master.at(r, c) * std::conj(pair.slave.at(r, c)));
            }
    }
    SUBCASE("scaling the master scales |z| linearly") {
        pair.master.at(0, 1) = {0.3, -0.8};
        pair.slave.at(0, 1) = {1.2, 0.4};
        auto z1 = form_interferogram(pair);
        for (auto& v : pair.master.values()) v *= 2.5;
        auto z2 = form_interferogram(pair);
        CHECK(std::abs(z2.at(0, 1)) == doctest::Approx(2.5 * std::abs(z1.at(0, 1))));
    }
    SUBCASE("shape mismatch throws") {
        SlcPair bad{ComplexRaster({2, 2}), ComplexRaster({2, 3})};
        CHECK_THROWS_AS(form_interferogram(bad), ShapeError);
    }
}

TEST_CASE("raster round trip is bit exact") {
    ComplexRaster r({2, 2});
    r.at(0, 0) = {1.5f, -2.25f};
    r.at(0, 1) = {0.0f, 3.0f};
    r.at(1, 0) = {-1e-7f, 123.0f};
    r.at(1, 1) = {7.0f, -0.5f};
    const std::string base = temp_base("rt_c64");
    write_raster(r, base);
    auto rr = read_complex_raster(base);
    const std::string base2 = temp_base("rt_c64_again");
    write_raster(rr, base2);
    CHECK(slurp(base + ".bin") == slurp(base2 + ".bin"));

    RealRaster f({3, 5}, Semantic::Coherence);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 5; ++j) f.at(i, j) = (i * 5 + j) / 15.0;
    const std::string fb = temp_base("rt_f32");
    write_raster(f, fb);
    auto fr = read_real_raster(fb, true);
    CHECK(fr.semantic() == Semantic::Coherence);
    const std::string fb2 = temp_base("rt_f32_again");
    write_raster(fr, fb2);
    CHECK(slurp(fb + ".bin") == slurp(fb2 + ".bin"));
}

TEST_CASE("raster io error cases are distinct") {
    RealRaster f({2, 3}, Semantic::Coherence);
    const std::string base = temp_base("err");
    write_raster(f, base);

    SUBCASE("truncated payload") {
        std::ofstream bin(base + ".bin", std::ios::binary | std::ios::trunc);
        bin << "xx";
        bin.close();
        CHECK_THROWS_AS(read_raster(base), PayloadSizeError);
    }
    SUBCASE("unknown dtype") {
        std::ofstream js(base + ".json", std::ios::trunc);
        js << R"({"rows":2,"cols":3,"dtype":"f64","semantic":"coherence","version":1})";
        js.close();
        CHECK_THROWS_AS(read_raster(base), DtypeError);
    }
    SUBCASE("malformed header") {
        std::ofstream js(base + ".json", std::ios::trunc);
        js << "{not json";
        js.close();
        CHECK_THROWS_AS(read_raster(base), FormatError);
    }
    SUBCASE("extra header field") {
        std::ofstream js(base + ".json", std::ios::trunc);
        js << R"({"rows":2,"cols":3,"dtype":"f32","semantic":"coherence","version":1,"x":0})";
        js.close();
        CHECK_THROWS_AS(read_raster(base), FormatError);
    }
    SUBCASE("missing file") { CHECK_THROWS_AS(read_raster(base + "_nope"), MissingFileError); }
    SUBCASE("range validation") {
        RealRaster bad({1, 1}, Semantic::Coherence);
        bad.at(0, 0) = 1.5;
        const std::string b2 = temp_base("range");
        write_raster(bad, b2);
        CHECK_THROWS_AS(read_real_raster(b2, true), RangeError);
        CHECK_NOTHROW(read_real_raster(b2, false));
    }
}

TEST_CASE("raster io round trip property over shapes") {
    // write -> read -> write must reproduce the first payload bit for bit
    for (auto [rows, cols] : {std::pair{1, 1}, {1, 7}, {5, 1}, {3, 4}}) {
        ComplexRaster r({rows, cols});
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) {
                auto n = site_normals(42, std::uint32_t(i), std::uint32_t(j), 0, 0);
                r.at(i, j) = {n[0], n[1]};
            }
        const std::string base = temp_base("prop");
        write_raster(r, base);
        auto rr = read_complex_raster(base);
        REQUIRE(rr.shape() == r.shape());
        const std::string base2 = temp_base("prop2");
        write_raster(rr, base2);
        CHECK(slurp(base + ".bin") == slurp(base2 + ".bin"));
        // a second read sees identical in-memory values
        auto rr2 = read_complex_raster(base2);
        for (size_t i = 0; i < rr.values().size(); ++i) CHECK(rr2.values()[i] == rr.values()[i]);
    }
}
