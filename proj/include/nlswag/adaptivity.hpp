// SPDX-License-Identifier: Apache-2.0

#ifndef NLSWAG_ADAPTIVITY_HPP
#define NLSWAG_ADAPTIVITY_HPP

#include <span>
#include <vector>

#include "nlswag/grid.hpp"

namespace nlswag {

// Reference phase for local unwrapping: argument of the complex mean of
// exp(j*phi) over the (up to) 5x5 block centered at (r, c), clipped at
// raster borders.
double local_unwrap_reference(const RealRaster& phase, int r, int c);

// Locally unwrapped phase over the search window centered at (r, c):
// each value is rho + wrap(phi - rho), i.e. within (rho - pi, rho + pi].
// Returns row-major (2*half+1)^2 values; out-of-raster positions are NaN.
std::vector<double> local_unwrap(const RealRaster& phase, int r, int c, int search_half);

// Weighted variance  sum(w v^2) - (sum(w v))^2  with weights normalized
// internally; clamped at 0.  NaN values must carry zero weight.
double weighted_phase_variance(std::span<const double> values, std::span<const double> weights);

// Variance of the single-look interferometric phase at coherence gamma
// (numerical integral of phi^2 over the phase density), cached on a
// 1024-point grid over [0, 1) with linear interpolation.
// gamma outside [0, 1) throws ValueError.
double expected_phase_variance(double gamma);

// Single-look interferometric phase density at true phase 0.
double phase_pdf(double phi, double gamma);

// Moment-based coherence from the speckle pattern, insensitive to the
// topographic phase:  r = E[|u1|^2 |u2|^2] / sqrt(E|u1|^4 E|u2|^4) with
// weighted moments; returns gamma_hat = sqrt(max(0, 2r - 1)) in [0, 1].
// The raw ratio is reported through *raw_ratio when non-null.
double moment_coherence(const SlcPair& pair, std::span<const double> weights, int r, int c,
                        int search_half, double* raw_ratio = nullptr);

// eta = (var - sigma0sq)/var when var > sigma0sq, else 0.
double heterogeneity_index(double var, double sigma0sq);

// Gaussian window width from heterogeneity: sigma = 2(1 - eta) + 1.
double eta_to_sigma(double eta);

// Local fringe frequency estimation: non-overlapping block x block tiles
// (edge tiles zero-padded), each zero-padded to fft_size x fft_size; the
// magnitude peak bin (interpreted in [-N/2, N/2)) gives the block
// frequency 2 pi k / N per axis, assigned to all pixels of the block and
// then smoothed with a Gaussian kernel (width sigma_smooth, truncated at
// 3 sigma, renormalized at borders).
FringeField estimate_fringe_field(const ComplexRaster& z, int block = 32, int fft_size = 64,
                                  double sigma_smooth = 8.0);

// Separable Gaussian smoothing used for the fringe field; exposed for tests.
RealRaster gaussian_smooth(const RealRaster& src, double sigma);

}  // namespace nlswag

#endif
