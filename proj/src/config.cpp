// SPDX-License-Identifier: Apache-2.0

#include "nlswag/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace nlswag {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& v) {
    if (v == "true" || v == "on" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "off" || v == "0" || v == "no") return false;
    throw ConfigError("expected a boolean, got '" + v + "'");
}

int parse_int(const std::string& v) {
    try {
        size_t pos = 0;
        int r = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return r;
    } catch (...) {
        throw ConfigError("expected an integer, got '" + v + "'");
    }
}

double parse_double(const std::string& v) {
    try {
        size_t pos = 0;
        double r = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return r;
    } catch (...) {
        throw ConfigError("expected a number, got '" + v + "'");
    }
}

std::uint64_t parse_u64(const std::string& v) {
    try {
        size_t pos = 0;
        unsigned long long r = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return r;
    } catch (...) {
        throw ConfigError("expected an unsigned integer, got '" + v + "'");
    }
}

}  // namespace

void RunConfig::apply_line(const std::string& key, const std::string& value) {
    if (key == "seed") seed = parse_u64(value);
    else if (key == "method") method = value;
    else if (key == "boxcar_k") boxcar_k = parse_int(value);
    else if (key == "search_half") params.search_half = parse_int(value);
    else if (key == "patch_half_stage1") params.patch_half1 = parse_int(value);
    else if (key == "patch_half_stage2") params.patch_half2 = parse_int(value);
    else if (key == "h1") params.h1 = parse_double(value);
    else if (key == "h2") params.h2 = parse_double(value);
    else if (key == "fringe_block") params.fringe_block = parse_int(value);
    else if (key == "fringe_fft") params.fringe_fft = parse_int(value);
    else if (key == "sigma_smooth") params.sigma_smooth = parse_double(value);
    else if (key == "fringe_compensation") params.fringe_compensation = parse_bool(value);
    else if (key == "xi_auto") params.xi_auto = parse_bool(value);
    else if (key == "xi_c0") { params.xi_coeffs[0] = parse_double(value); params.xi_auto = false; }
    else if (key == "xi_c1") { params.xi_coeffs[1] = parse_double(value); params.xi_auto = false; }
    else if (key == "xi_c2") { params.xi_coeffs[2] = parse_double(value); params.xi_auto = false; }
    else if (key == "xi_table") xi_table_path = value;
    else if (key == "threads") params.threads = parse_int(value);
    else if (key == "kernel") params.kernel = kernels::parse_variant(value);
    else throw ConfigError("unknown configuration key: " + key);
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw MissingFileError("cannot open config: " + path);
    RunConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + " is not 'key = value': " + line);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("config line " + std::to_string(lineno) + " has an empty key or value");
        cfg.apply_line(key, value);
    }
    cfg.validate();
    return cfg;
}

void RunConfig::validate() const {
    params.validate();
    if (method != "boxcar" && method != "stage1" && method != "nlswag")
        throw ConfigError("method must be one of boxcar|stage1|nlswag, got '" + method + "'");
    if (boxcar_k < 1 || boxcar_k % 2 == 0) throw ConfigError("boxcar_k must be odd and >= 1");
}

}  // namespace nlswag
