// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "nlswag/adaptivity.hpp"
#include "nlswag/filter.hpp"
#include "nlswag/interferogram.hpp"
#include "nlswag/rng.hpp"
#include "nlswag/similarity.hpp"
#include "nlswag/simulate.hpp"

#include "filter_internal.hpp"

namespace nlswag {

void FilterParams::validate() const {
    if (search_half < 1) throw ConfigError("search_half must be >= 1");
    if (patch_half1 < 0 || patch_half2 < 0) throw ConfigError("patch half widths must be >= 0");
    if (!(h1 > 0.0) || !(h2 > 0.0)) throw ConfigError("kernel bandwidths must be positive");
    if (fringe_block < 1) throw ConfigError("fringe block size must be >= 1");
    if (fringe_fft < fringe_block) throw ConfigError("fringe FFT size must be >= block size");
    if ((fringe_fft & (fringe_fft - 1)) != 0) throw ConfigError("fringe FFT size must be a power of two");
    if (!(sigma_smooth > 0.0)) throw ConfigError("fringe smoothing width must be positive");
    if (threads < 0) throw ConfigError("threads must be >= 0");
    const int reach = search_half + std::max(patch_half1, patch_half2);
    if (reach + 1 > detail::kGuard)
        throw ConfigError("search_half + patch_half exceeds the supported kernel reach of " +
                          std::to_string(detail::kGuard - 1));
}

double enl_from_weights(std::span<const double> weights) {
    double s = 0.0, q = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw ValueError("weights must be non-negative");
        s += w;
        q += w * w;
    }
    if (!(q > 0.0)) throw ValueError("ENL undefined for an all-zero weight map");
    return s * s / q;
}

PatchEstimate patch_weighted_mean(const SlcPair& pair, std::span<const double> weights, int r, int c,
                                  int search_half, int patch_half, const FringeField* fringe) {
    pair.require_consistent();
    const int side = 2 * search_half + 1;
    if (weights.size() != std::size_t(side) * std::size_t(side))
        throw ValueError("weight map size does not match the search window");
    const int pside = 2 * patch_half + 1;

    PatchEstimate est;
    est.patch_half = patch_half;
    est.z.assign(std::size_t(pside) * pside, cpx(0.0, 0.0));
    est.intensity.assign(std::size_t(pside) * pside, 0.0);
    est.p1.assign(std::size_t(pside) * pside, 0.0);
    est.p2.assign(std::size_t(pside) * pside, 0.0);
    est.mass.assign(std::size_t(pside) * pside, 0.0);
    est.enl = enl_from_weights(weights);

    for (int daz = -search_half; daz <= search_half; ++daz) {
        for (int dr = -search_half; dr <= search_half; ++dr) {
            const double w = weights[std::size_t(daz + search_half) * side + std::size_t(dr + search_half)];
            if (w == 0.0) continue;
            for (int oa = -patch_half; oa <= patch_half; ++oa) {
                for (int oc = -patch_half; oc <= patch_half; ++oc) {
                    const int qr = r + oa, qc = c + oc;        // patch pixel
                    const int yr = qr + daz, yc = qc + dr;     // candidate source
                    if (!pair.master.contains(yr, yc)) continue;
                    const std::size_t o = std::size_t(oa + patch_half) * pside + std::size_t(oc + patch_half);
                    const cpx u1 = pair.master.at(yr, yc);
                    const cpx u2 = pair.slave.at(yr, yc);
                    cpx zc = u1 * std::conj(u2);
                    if (fringe && fringe->shape() == pair.shape() && pair.master.contains(qr, qc)) {
                        const double fa = fringe->f_azimuth.at(qr, qc);
                        const double fr = fringe->f_range.at(qr, qc);
                        zc *= std::polar(1.0, -(double(daz) * fa + double(dr) * fr));
                    }
                    est.z[o] += w * zc;
                    const double a1 = std::norm(u1), a2 = std::norm(u2);
                    est.p1[o] += w * a1;
                    est.p2[o] += w * a2;
                    est.mass[o] += w;
                }
            }
        }
    }
    for (std::size_t o = 0; o < est.mass.size(); ++o) {
        if (est.mass[o] > 0.0) {
            est.z[o] /= est.mass[o];
            est.p1[o] /= est.mass[o];
            est.p2[o] /= est.mass[o];
        }
        est.intensity[o] = 0.5 * (est.p1[o] + est.p2[o]);
    }
    return est;
}

const XiTable::Row& XiTable::nearest(double coherence) const {
    if (rows.empty()) throw ConfigError("empty xi calibration table");
    std::size_t best = 0;
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (std::abs(rows[i].coherence - coherence) < std::abs(rows[best].coherence - coherence))
            best = i;
    return rows[best];
}

XiTable XiTable::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw MissingFileError("cannot open xi table: " + path);
    XiTable t;
    std::string line;
    bool version_seen = false;
    while (std::getline(f, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        std::string first;
        if (!(ss >> first)) continue;
        if (first == "version") {
            int v = 0;
            if (!(ss >> v) || v != 1) throw FormatError("unsupported xi table version in " + path);
            version_seen = true;
            continue;
        }
        XiTable::Row row{};
        try {
            row.coherence = std::stod(first);
        } catch (...) {
            throw FormatError("malformed xi table line: " + line);
        }
        if (!(ss >> row.coeffs[0] >> row.coeffs[1] >> row.coeffs[2]))
            throw FormatError("malformed xi table line: " + line);
        t.rows.push_back(row);
    }
    if (!version_seen) throw FormatError("xi table missing version header: " + path);
    if (t.rows.empty()) throw FormatError("xi table has no rows: " + path);
    return t;
}

void XiTable::save(const std::string& path) const {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw MissingFileError("cannot open for write: " + path);
    f << "# xi calibration table: coherence c0 c1 c2\n";
    f << "version 1\n";
    f.precision(17);
    for (const auto& r : rows)
        f << r.coherence << " " << r.coeffs[0] << " " << r.coeffs[1] << " " << r.coeffs[2] << "\n";
}

std::array<double, 3> fit_quadratic(std::span<const double> t, std::span<const double> y) {
    if (t.size() != y.size() || t.size() < 3)
        throw ValueError("quadratic fit needs at least three points");
    double s[5] = {0, 0, 0, 0, 0};
    double b[3] = {0, 0, 0};
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double t1 = t[i], t2 = t1 * t1;
        s[0] += 1.0;
        s[1] += t1;
        s[2] += t2;
        s[3] += t2 * t1;
        s[4] += t2 * t2;
        b[0] += y[i];
        b[1] += t1 * y[i];
        b[2] += t2 * y[i];
    }
    double m[3][4] = {{s[0], s[1], s[2], b[0]}, {s[1], s[2], s[3], b[1]}, {s[2], s[3], s[4], b[2]}};
    // Gaussian elimination with partial pivoting
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        if (m[piv][col] == 0.0) throw ValueError("quadratic fit is degenerate");
        if (piv != col)
            for (int k = 0; k < 4; ++k) std::swap(m[piv][k], m[col][k]);
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            const double f = m[r][col] / m[col][col];
            for (int k = col; k < 4; ++k) m[r][k] -= f * m[col][k];
        }
    }
    return {m[0][3] / m[0][0], m[1][3] / m[1][1], m[2][3] / m[2][2]};
}

XiCalibration calibrate_xi(double coherence_level, std::span<const double> sigma_grid,
                           std::uint64_t seed, const XiCalibrationOptions& opt) {
    if (sigma_grid.size() < 3) throw ValueError("xi calibration needs at least three window widths");
    if (!(coherence_level >= 0.0) || coherence_level >= 1.0)
        throw ValueError("calibration coherence must lie in [0, 1)");

    FilterParams params = opt.params;
    params.validate();

    SceneSpec scene = make_ramp(opt.scene_shape, 0.0, 0.0, coherence_level, 1.0);
    SlcPair pair = sample_slc_pair(scene, SimSeed{seed, 0});
    Stage1Output guide = stage1_filter(pair, params);

    const int margin = params.patch_half2;
    const int rows = opt.scene_shape.rows, cols = opt.scene_shape.cols;
    const int span_r = rows - 2 * margin, span_c = cols - 2 * margin;
    if (span_r < 2 || span_c < 2) throw ValueError("calibration scene too small");

    XiCalibration cal;
    cal.coherence_level = coherence_level;
    cal.sigma_grid.assign(sigma_grid.begin(), sigma_grid.end());

    std::vector<double> tvals;
    for (std::size_t si = 0; si < sigma_grid.size(); ++si) {
        const double sigma = sigma_grid[si];
        if (!(sigma > 0.0)) throw ValueError("window widths must be positive");
        GaussianWindow win{sigma, params.patch_half2};

        double mean = 0.0, m2 = 0.0;
        std::vector<double> vals(std::size_t(opt.pair_count));
        for (int i = 0; i < opt.pair_count; ++i) {
            auto draw = Philox4x32::block(seed ^ 0xCA11B7A7Eu, std::uint32_t(i), std::uint32_t(si), 1, 2);
            int xr = margin + int(draw[0] % std::uint32_t(span_r));
            int xc = margin + int(draw[1] % std::uint32_t(span_c));
            int yr = margin + int(draw[2] % std::uint32_t(span_r));
            int yc = margin + int(draw[3] % std::uint32_t(span_c));
            if (xr == yr && xc == yc) yc = margin + (yc - margin + 1) % span_c;
            vals[std::size_t(i)] = patch_dissim_stage2(guide.bundle, xr, xc, yr, yc, win, nullptr);
        }
        for (double v : vals) mean += v;
        mean /= double(opt.pair_count);
        for (double v : vals) m2 += (v - mean) * (v - mean);
        cal.sigma_delta2.push_back(std::sqrt(m2 / double(opt.pair_count)));
        tvals.push_back(1.0 / sigma);
    }
    cal.coeffs = fit_quadratic(tvals, cal.sigma_delta2);
    return cal;
}

// Calibration of sigma_delta2(1/sigma) per coherence level, generated with
// `nlswag calibrate` (seed 20240901, 128x128 scenes, 20000 pairs); see
// data/xi_calibration.txt.
XiTable XiTable::embedded_default() {
    XiTable t;
    t.rows = {
        {0.3, {0.013110665653270537, 0.0046156583896489606, 0.0018543845827035845}},
        {0.5, {0.014253853924978169, 0.0048166238827008091, 0.0015160688791508276}},
        {0.7, {0.013963495049644415, 0.0043501895880660385, 0.0025342796888686409}},
        {0.9, {0.013424740142624191, 0.0046712206919991978, 0.0033841496788972643}},
    };
    return t;
}

NlswagResult nlswag(const SlcPair& pair, const FilterParams& p, const XiTable* xi_table) {
    p.validate();
    pair.require_consistent();

    NlswagResult res{EstimateBundle{}, stage1_filter(pair, p), FringeField{}, RealRaster{}, {0, 0, 0}, 0.0};

    // median stage-1 coherence selects the xi calibration row
    std::array<double, 3> xi = p.xi_coeffs;
    {
        std::vector<double> coh = res.stage1.bundle.coherence.values();
        const std::size_t mid = coh.size() / 2;
        std::nth_element(coh.begin(), coh.begin() + std::ptrdiff_t(mid), coh.end());
        res.median_coherence = coh[mid];
    }
    if (p.xi_auto) {
        XiTable def;
        const XiTable& table = xi_table ? *xi_table : (def = XiTable::embedded_default());
        xi = table.nearest(res.median_coherence).coeffs;
    }
    res.xi_used = xi;

    const GridShape shape = pair.shape();
    res.sigma_gauss = RealRaster(shape, Semantic::Sigma);
    for (int r = 0; r < shape.rows; ++r)
        for (int c = 0; c < shape.cols; ++c)
            res.sigma_gauss.at(r, c) = eta_to_sigma(res.stage1.eta.at(r, c));

    res.fringe = estimate_fringe_field(form_interferogram(pair), p.fringe_block, p.fringe_fft,
                                       p.sigma_smooth);

    res.bundle = stage2_filter(pair, res.stage1, p.fringe_compensation ? &res.fringe : nullptr, p, xi);
    return res;
}

}  // namespace nlswag
