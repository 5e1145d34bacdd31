// SPDX-License-Identifier: Apache-2.0

#ifndef NLSWAG_FILTER_HPP
#define NLSWAG_FILTER_HPP

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nlswag/grid.hpp"
#include "nlswag/kernels/kernels.hpp"

namespace nlswag {

struct FilterParams {
    int search_half = 10;  // 21x21 search window
    int patch_half1 = 3;   // 7x7 stage-1 patches
    int patch_half2 = 5;   // 11x11 stage-2 patch support
    double h1 = 4.0;
    double h2 = 2.0;
    int fringe_block = 32;
    int fringe_fft = 64;
    double sigma_smooth = 8.0;
    bool fringe_compensation = true;
    // Kernel scale polynomial xi(t), t = 1/sigma_gauss.  With xi_auto the
    // coefficients come from the calibration table row nearest to the
    // scene's median stage-1 coherence.
    bool xi_auto = true;
    std::array<double, 3> xi_coeffs = {0.0, 0.0, 0.0};
    int threads = 0;  // 0 = all hardware threads
    kernels::Variant kernel = kernels::Variant::Auto;

    int search_side() const { return 2 * search_half + 1; }
    int window_count() const { return search_side() * search_side(); }
    void validate() const;
};

// Equivalent number of looks of a weighted mean: (sum w)^2 / sum w^2.
double enl_from_weights(std::span<const double> weights);

// Patch-wise weighted mean over a search window for one center pixel.
// Offsets are row-major over the (2*patch_half+1)^2 patch; entries where
// no candidate contributed have mass 0.  With a fringe field, complex
// contributions are rotated by exp(-j*(y-x)^T f(x+o)) so that a linear
// phase trend sums coherently.
struct PatchEstimate {
    int patch_half = 0;
    std::vector<cpx> z;
    std::vector<double> intensity;
    std::vector<double> p1;
    std::vector<double> p2;
    std::vector<double> mass;
    double enl = 1.0;
};

PatchEstimate patch_weighted_mean(const SlcPair& pair, std::span<const double> weights, int r, int c,
                                  int search_half, int patch_half,
                                  const FringeField* fringe = nullptr);

// Guidance products of the first stage.
struct Stage1Output {
    EstimateBundle bundle;    // aggregated phase/intensity/coherence/ENL
    RealRaster eta;           // local phase heterogeneity in [0, 1)
    RealRaster moment_coh;    // moment-based coherence estimate
    RealRaster center_enl;    // per-center ENL of the weight maps (pre-aggregation)
};

Stage1Output stage1_filter(const SlcPair& pair, const FilterParams& p);

EstimateBundle stage2_filter(const SlcPair& pair, const Stage1Output& guidance,
                             const FringeField* fringe, const FilterParams& p,
                             const std::array<double, 3>& xi);

// Calibration of the xi polynomial: simulate a homogeneous scene at the
// given coherence, run stage 1, measure the standard deviation of stage-2
// patch dissimilarities between random pixel pairs for each Gaussian
// window width, and fit sigma_delta2(1/sigma) with a quadratic.
struct XiCalibration {
    double coherence_level = 0.7;
    std::vector<double> sigma_grid;
    std::vector<double> sigma_delta2;
    std::array<double, 3> coeffs = {0.0, 0.0, 0.0};
};

struct XiCalibrationOptions {
    GridShape scene_shape{128, 128};
    int pair_count = 20000;
    FilterParams params{};
};

XiCalibration calibrate_xi(double coherence_level, std::span<const double> sigma_grid,
                           std::uint64_t seed, const XiCalibrationOptions& opt = {});

// Least-squares fit y(t) = c0 + c1 t + c2 t^2; needs >= 3 points.
std::array<double, 3> fit_quadratic(std::span<const double> t, std::span<const double> y);

// Versioned plain-text calibration table, one "gamma c0 c1 c2" row per
// coherence level.
struct XiTable {
    struct Row {
        double coherence;
        std::array<double, 3> coeffs;
    };
    std::vector<Row> rows;

    const Row& nearest(double coherence) const;
    static XiTable embedded_default();
    static XiTable load(const std::string& path);
    void save(const std::string& path) const;
};

struct NlswagResult {
    EstimateBundle bundle;
    Stage1Output stage1;
    FringeField fringe;
    RealRaster sigma_gauss;
    std::array<double, 3> xi_used = {0.0, 0.0, 0.0};
    double median_coherence = 0.0;
};

// Full two-stage pipeline: stage 1, heterogeneity and fringe estimation,
// stage 2.  The xi table defaults to the embedded calibration.
NlswagResult nlswag(const SlcPair& pair, const FilterParams& p, const XiTable* xi_table = nullptr);

}  // namespace nlswag

#endif
