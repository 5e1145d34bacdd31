// SPDX-License-Identifier: Apache-2.0

#ifndef NLSWAG_SIMULATE_HPP
#define NLSWAG_SIMULATE_HPP

#include <cstdint>
#include <optional>

#include "nlswag/grid.hpp"

namespace nlswag {

// Ground truth of a synthetic scene: amplitude A, coherence gamma and
// interferometric phase phi of the per-pixel 2x2 covariance matrix.
struct SceneSpec {
    RealRaster amplitude;   // Semantic::Amplitude, A >= 0
    RealRaster coherence;   // Semantic::Coherence
    RealRaster true_phase;  // Semantic::Phase

    const GridShape& shape() const { return amplitude.shape(); }
    void validate() const;
};

struct SimSeed {
    std::uint64_t seed = 0;
    std::uint32_t trial = 0;
};

// Draws a correlated circular complex Gaussian SLC pair:
//   u1 = A*r1,  u2 = A*(gamma*exp(-j*phi)*r1 + sqrt(1-gamma^2)*r2)
// with r1, r2 independent unit-variance circular normals, so that
// E|u1|^2 = E|u2|^2 = A^2 and E[u1*conj(u2)] = A^2*gamma*exp(j*phi).
// Deterministic per (seed, trial, pixel); parallel generation order-free.
SlcPair sample_slc_pair(const SceneSpec& scene, SimSeed seed);

// Linear phase ramp: phase[r,c] = wrap(f_range*c + f_azimuth*r).
SceneSpec make_ramp(GridShape shape, double f_range, double f_azimuth,
                    double coherence = 0.7, double amplitude = 1.0);

struct StepOptions {
    double left_phase = -kPi / 3.0;
    double right_phase = kPi / 3.0;
    double left_coherence = 0.7;
    double right_coherence = 0.7;
    double intensity_ratio = 1.0;  // right/left intensity, e.g. 10^(6/10) for a 6 dB jump
    double left_amplitude = 1.0;
};

// Vertical edge at the column midpoint: columns < cols/2 take the left
// values, the rest the right values.
SceneSpec make_step(GridShape shape, const StepOptions& opt = {});

// Midpoint-displacement fractal heightfield on a (2^k+1)^2 grid, corners
// seeded to 0, perturbation amplitude roughness*2^-level, uniform in
// [-amp, amp].  With roughness = 0 the surface is the bilinear
// interpolation of the corners.  Returned unwrapped (Semantic::Generic).
RealRaster fractal_surface(int grid_size, double roughness, std::uint64_t seed);

struct FractalOptions {
    double roughness = 1.0;
    double phase_span = 6.0 * kPi;  // max - min of the unwrapped surface, radians
    double coherence = 0.7;
    double amplitude = 1.0;
    int grid_size = 0;  // 0 = smallest (2^k+1) covering shape; must otherwise cover shape
};

// Heightfield cropped to shape and affinely rescaled so that
// max - min == phase_span (radians), centered on 0, not yet wrapped.
RealRaster fractal_unwrapped(GridShape shape, std::uint64_t seed, const FractalOptions& opt = {});

// Fractal scene: fractal_unwrapped() wrapped to (-pi, pi].
SceneSpec make_fractal(GridShape shape, std::uint64_t seed, const FractalOptions& opt = {});

}  // namespace nlswag

#endif
