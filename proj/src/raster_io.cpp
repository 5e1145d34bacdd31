// SPDX-License-Identifier: Apache-2.0

#include "nlswag/raster_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include <nlohmann/json.hpp>

static_assert(std::endian::native == std::endian::little,
              "raster payloads are little-endian; big-endian hosts need byte swaps");

namespace nlswag {
namespace {

using json = nlohmann::json;

struct Header {
    int rows = 0;
    int cols = 0;
    std::string dtype;
    Semantic semantic = Semantic::Generic;
};

void write_sidecar(const std::string& base, const GridShape& s, const char* dtype, Semantic sem) {
    json j;
    j["rows"] = s.rows;
    j["cols"] = s.cols;
    j["dtype"] = dtype;
    j["semantic"] = semantic_name(sem);
    j["version"] = 1;
    std::ofstream f(base + ".json", std::ios::trunc);
    if (!f) throw MissingFileError("cannot open for write: " + base + ".json");
    f << j.dump(2) << "\n";
}

void write_payload(const std::string& base, const void* data, size_t bytes) {
    std::ofstream f(base + ".bin", std::ios::binary | std::ios::trunc);
    if (!f) throw MissingFileError("cannot open for write: " + base + ".bin");
    f.write(static_cast<const char*>(data), std::streamsize(bytes));
    if (!f) throw Error("short write: " + base + ".bin");
}

Header read_sidecar(const std::string& base) {
    std::ifstream f(base + ".json");
    if (!f) throw MissingFileError("missing sidecar: " + base + ".json");
    json j;
    try {
        f >> j;
    } catch (const json::exception& e) {
        throw FormatError("malformed sidecar " + base + ".json: " + e.what());
    }
    if (!j.is_object()) throw FormatError("sidecar is not a JSON object: " + base + ".json");
    for (const char* key : {"rows", "cols", "dtype", "semantic", "version"})
        if (!j.contains(key)) throw FormatError(std::string("sidecar missing field '") + key + "': " + base);
    if (j.size() != 5) throw FormatError("sidecar has unexpected fields: " + base);
    if (!j["version"].is_number_integer() || j["version"].get<int>() != 1)
        throw FormatError("unsupported raster format version in " + base);
    if (!j["rows"].is_number_integer() || !j["cols"].is_number_integer() ||
        !j["dtype"].is_string() || !j["semantic"].is_string())
        throw FormatError("sidecar field has wrong type: " + base);

    Header h;
    h.rows = j["rows"].get<int>();
    h.cols = j["cols"].get<int>();
    if (h.rows < 1 || h.cols < 1) throw FormatError("non-positive raster dimensions in " + base);
    h.dtype = j["dtype"].get<std::string>();
    h.semantic = semantic_from_name(j["semantic"].get<std::string>());
    return h;
}

std::vector<char> read_payload(const std::string& base, size_t expected_bytes) {
    std::ifstream f(base + ".bin", std::ios::binary | std::ios::ate);
    if (!f) throw MissingFileError("missing payload: " + base + ".bin");
    auto bytes = static_cast<size_t>(f.tellg());
    if (bytes != expected_bytes)
        throw PayloadSizeError("payload length " + std::to_string(bytes) + " != expected " +
                               std::to_string(expected_bytes) + " for " + base + ".bin");
    std::vector<char> buf(bytes);
    f.seekg(0);
    f.read(buf.data(), std::streamsize(bytes));
    if (!f) throw Error("short read: " + base + ".bin");
    return buf;
}

}  // namespace

void write_raster(const ComplexRaster& r, const std::string& base) {
    std::vector<float> out(size_t(r.shape().size()) * 2);
    const auto& v = r.values();
    for (size_t i = 0; i < v.size(); ++i) {
        out[2 * i] = static_cast<float>(v[i].real());
        out[2 * i + 1] = static_cast<float>(v[i].imag());
    }
    write_sidecar(base, r.shape(), "c64", Semantic::Generic);
    write_payload(base, out.data(), out.size() * sizeof(float));
}

void write_raster(const RealRaster& r, const std::string& base) {
    std::vector<float> out(size_t(r.shape().size()));
    const auto& v = r.values();
    for (size_t i = 0; i < v.size(); ++i) out[i] = static_cast<float>(v[i]);
    write_sidecar(base, r.shape(), "f32", r.semantic());
    write_payload(base, out.data(), out.size() * sizeof(float));
}

AnyRaster read_raster(const std::string& base, bool validate) {
    Header h = read_sidecar(base);
    GridShape shape{h.rows, h.cols};
    if (h.dtype == "c64") {
        auto buf = read_payload(base, size_t(shape.size()) * 8);
        const float* p = reinterpret_cast<const float*>(buf.data());
        ComplexRaster r(shape);
        auto& v = r.values();
        for (size_t i = 0; i < v.size(); ++i) {
            float re = p[2 * i], im = p[2 * i + 1];
            if (!std::isfinite(re) || !std::isfinite(im))
                throw RangeError("non-finite complex sample in " + base + ".bin");
            v[i] = cpx(re, im);
        }
        return r;
    }
    if (h.dtype == "f32") {
        auto buf = read_payload(base, size_t(shape.size()) * 4);
        const float* p = reinterpret_cast<const float*>(buf.data());
        RealRaster r(shape, h.semantic);
        auto& v = r.values();
        for (size_t i = 0; i < v.size(); ++i) {
            if (!std::isfinite(p[i])) throw RangeError("non-finite sample in " + base + ".bin");
            if (validate && !semantic_allows(h.semantic, p[i]))
                throw RangeError("value " + std::to_string(p[i]) + " outside range of semantic '" +
                                 semantic_name(h.semantic) + "' in " + base + ".bin");
            v[i] = p[i];
        }
        return r;
    }
    throw DtypeError("unknown dtype '" + h.dtype + "' in " + base + ".json");
}

ComplexRaster read_complex_raster(const std::string& base, bool validate) {
    auto any = read_raster(base, validate);
    if (auto* c = std::get_if<ComplexRaster>(&any)) return std::move(*c);
    throw DtypeError("expected complex (c64) raster at " + base);
}

RealRaster read_real_raster(const std::string& base, bool validate) {
    auto any = read_raster(base, validate);
    if (auto* r = std::get_if<RealRaster>(&any)) return std::move(*r);
    throw DtypeError("expected real (f32) raster at " + base);
}

}  // namespace nlswag
