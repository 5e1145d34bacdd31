// SPDX-License-Identifier: Apache-2.0

#include "nlswag/simulate.hpp"

#include <algorithm>
#include <cmath>

#include "nlswag/rng.hpp"

namespace nlswag {

void SceneSpec::validate() const {
    require_same_shape(amplitude.shape(), coherence.shape());
    require_same_shape(amplitude.shape(), true_phase.shape());
    for (double a : amplitude.values())
        if (!(a >= 0.0) || !std::isfinite(a)) throw ValueError("scene amplitude must be finite and >= 0");
    for (double g : coherence.values())
        if (!(g >= 0.0 && g <= 1.0)) throw ValueError("scene coherence must lie in [0, 1]");
    for (double p : true_phase.values())
        if (!std::isfinite(p)) throw ValueError("scene phase must be finite");
}

SlcPair sample_slc_pair(const SceneSpec& scene, SimSeed seed) {
    scene.validate();
    const GridShape shape = scene.shape();
    SlcPair pair{ComplexRaster(shape), ComplexRaster(shape)};
    const auto& amp = scene.amplitude.values();
    const auto& coh = scene.coherence.values();
    const auto& phi = scene.true_phase.values();
    auto& u1 = pair.master.values();
    auto& u2 = pair.slave.values();

    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int r = 0; r < shape.rows; ++r) {
        for (int c = 0; c < shape.cols; ++c) {
            const size_t i = size_t(r) * shape.cols + c;
            auto z = site_normals(seed.seed, std::uint32_t(r), std::uint32_t(c), 0, seed.trial);
            cpx r1(z[0] * inv_sqrt2, z[1] * inv_sqrt2);
            cpx r2(z[2] * inv_sqrt2, z[3] * inv_sqrt2);
            const double A = amp[i];
            const double g = coh[i];
            const cpx rot = std::polar(1.0, -phi[i]);
            u1[i] = A * r1;
            u2[i] = A * (g * rot * r1 + std::sqrt(1.0 - g * g) * r2);
        }
    }
    return pair;
}

SceneSpec make_ramp(GridShape shape, double f_range, double f_azimuth,
                    double coherence, double amplitude) {
    require_valid(shape);
    SceneSpec s{RealRaster(shape, Semantic::Amplitude, amplitude),
                RealRaster(shape, Semantic::Coherence, coherence),
                RealRaster(shape, Semantic::Phase)};
    for (int r = 0; r < shape.rows; ++r)
        for (int c = 0; c < shape.cols; ++c)
            s.true_phase.at(r, c) = wrap_phase(f_range * c + f_azimuth * r);
    return s;
}

SceneSpec make_step(GridShape shape, const StepOptions& opt) {
    require_valid(shape);
    if (opt.intensity_ratio <= 0.0) throw ValueError("intensity ratio must be positive");
    SceneSpec s{RealRaster(shape, Semantic::Amplitude),
                RealRaster(shape, Semantic::Coherence),
                RealRaster(shape, Semantic::Phase)};
    const int edge = shape.cols / 2;
    const double right_amplitude = opt.left_amplitude * std::sqrt(opt.intensity_ratio);
    for (int r = 0; r < shape.rows; ++r) {
        for (int c = 0; c < shape.cols; ++c) {
            const bool left = c < edge;
            s.amplitude.at(r, c) = left ? opt.left_amplitude : right_amplitude;
            s.coherence.at(r, c) = left ? opt.left_coherence : opt.right_coherence;
            s.true_phase.at(r, c) = wrap_phase(left ? opt.left_phase : opt.right_phase);
        }
    }
    return s;
}

namespace {

bool is_pow2_plus_1(int n) { return n >= 2 && ((n - 1) & (n - 2)) == 0; }

}  // namespace

RealRaster fractal_surface(int grid_size, double roughness, std::uint64_t seed) {
    if (!is_pow2_plus_1(grid_size)) throw ValueError("fractal grid size must be 2^k + 1");
    if (roughness < 0.0) throw ValueError("roughness must be >= 0");
    const int n = grid_size;
    RealRaster h({n, n}, Semantic::Generic, 0.0);

    // Corners fixed to 0.  Each subdivision level fills square centers from
    // the four quad corners, then edge midpoints from their two endpoints,
    // with a uniform perturbation of amplitude roughness * 2^-level.
    std::uint32_t level = 0;
    for (int step = n - 1; step > 1; step /= 2, ++level) {
        const int half = step / 2;
        const double amp = roughness * std::ldexp(1.0, -int(level));

        for (int r = half; r < n; r += step) {
            for (int c = half; c < n; c += step) {
                double mean = 0.25 * (h.at(r - half, c - half) + h.at(r - half, c + half) +
                                      h.at(r + half, c - half) + h.at(r + half, c + half));
                h.at(r, c) = mean + amp * site_uniform_pm1(seed, r, c, 0x40000000u + level);
            }
        }
        // Horizontal edges
        for (int r = 0; r < n; r += step) {
            for (int c = half; c < n; c += step) {
                double mean = 0.5 * (h.at(r, c - half) + h.at(r, c + half));
                h.at(r, c) = mean + amp * site_uniform_pm1(seed, r, c, 0x50000000u + level);
            }
        }
        // Vertical edges
        for (int r = half; r < n; r += step) {
            for (int c = 0; c < n; c += step) {
                double mean = 0.5 * (h.at(r - half, c) + h.at(r + half, c));
                h.at(r, c) = mean + amp * site_uniform_pm1(seed, r, c, 0x60000000u + level);
            }
        }
    }
    return h;
}

RealRaster fractal_unwrapped(GridShape shape, std::uint64_t seed, const FractalOptions& opt) {
    require_valid(shape);
    int grid = opt.grid_size;
    if (grid == 0) {
        grid = 2;
        while (grid + 1 < std::max(shape.rows, shape.cols)) grid *= 2;
        grid += 1;
    }
    if (!is_pow2_plus_1(grid)) throw ValueError("fractal grid size must be 2^k + 1");
    if (shape.rows > grid || shape.cols > grid)
        throw ValueError("requested shape exceeds the generated fractal grid");

    RealRaster surf = fractal_surface(grid, opt.roughness, seed);

    double lo = surf.at(0, 0), hi = surf.at(0, 0);
    for (int r = 0; r < shape.rows; ++r)
        for (int c = 0; c < shape.cols; ++c) {
            lo = std::min(lo, surf.at(r, c));
            hi = std::max(hi, surf.at(r, c));
        }

    RealRaster out(shape, Semantic::Generic);
    const double range = hi - lo;
    const double scale = range > 0.0 ? opt.phase_span / range : 0.0;
    for (int r = 0; r < shape.rows; ++r)
        for (int c = 0; c < shape.cols; ++c)
            out.at(r, c) = (surf.at(r, c) - lo) * scale - 0.5 * opt.phase_span;
    return out;
}

SceneSpec make_fractal(GridShape shape, std::uint64_t seed, const FractalOptions& opt) {
    RealRaster unwrapped = fractal_unwrapped(shape, seed, opt);
    SceneSpec s{RealRaster(shape, Semantic::Amplitude, opt.amplitude),
                RealRaster(shape, Semantic::Coherence, opt.coherence),
                RealRaster(shape, Semantic::Phase)};
    for (int r = 0; r < shape.rows; ++r)
        for (int c = 0; c < shape.cols; ++c)
            s.true_phase.at(r, c) = wrap_phase(unwrapped.at(r, c));
    return s;
}

}  // namespace nlswag
