// SPDX-License-Identifier: Apache-2.0

#ifndef NLSWAG_SIMILARITY_HPP
#define NLSWAG_SIMILARITY_HPP

#include <optional>
#include <span>
#include <vector>

#include "nlswag/grid.hpp"

namespace nlswag {

// Centered square patch of side 2*half_width + 1.
struct PatchGeometry {
    int half_width = 3;

    int side() const { return 2 * half_width + 1; }
    int count() const { return side() * side(); }
};

// Gaussian patch window g(o) = exp(-|o|^2 / (2 sigma^2)); g(0) = 1.
struct GaussianWindow {
    double sigma = 3.0;
    int half_width = 5;

    double g(int o_az, int o_r) const;
    double mass() const;  // sum of g over the full patch
};

// Conditional likelihood of two SLC pixel pairs sharing (I, theta, gamma).
// Larger values mean more similar pixels.  Throws ValueError when all four
// amplitudes are zero.  May overflow to +inf in the clamp regime; use
// neg_log_delta1 in sums.
double delta1_pixel(cpx u1x, cpx u2x, cpx u1y, cpx u2y);

// -log(delta1), saturated to a finite cap; this is the quantity patch
// dissimilarities sum.
double neg_log_delta1(cpx u1x, cpx u2x, cpx u1y, cpx u2y);

// Symmetric Kullback-Leibler divergence between two zero-mean circular
// Gaussian pixel models (intensity, coherence, phase).  >= 0, and 0 iff
// the parameters agree.  Coherences are clamped to <= 1 - 1e-9; throws
// ValueError for non-positive intensities.
double delta2_pixel(double Ix, double gammax, double phix, double Iy, double gammay, double phiy);

// Stage-1 patch dissimilarity between centers x and y:
//   (N_full / N_valid) * sum over valid offsets of -log delta1(x+o, y+o).
// Offsets where either patch pixel leaves the raster are skipped and the
// partial sum is rescaled to the full patch size, which keeps border
// values comparable to interior ones (a plain sum in the interior).
double patch_dissim_stage1(const SlcPair& pair, int xr, int xc, int yr, int yc,
                           const PatchGeometry& geom);

// Stage-2 adaptive patch dissimilarity on a guidance bundle:
//   sum_o g(o) * delta2(x+o, y+o) / sum_o g(o)
// over valid offsets.  With a fringe field, the candidate phase is
// compensated with the frequency at the center x:
//   phi_y' = phi(y+o) - (y - x)^T f(x).
double patch_dissim_stage2(const EstimateBundle& guide, int xr, int xc, int yr, int yc,
                           const GaussianWindow& win, const FringeField* fringe = nullptr);

// Exponential kernel w = exp(-dissim / (h * scale)), normalized to sum 1.
// +inf dissimilarities yield zero weight.  Throws ValueError unless h > 0,
// scale > 0 and at least one dissimilarity is finite.
std::vector<double> weights_from_dissim(std::span<const double> dissim, double h, double scale = 1.0);

}  // namespace nlswag

#endif
