// SPDX-License-Identifier: Apache-2.0

#ifndef NLSWAG_EVAL_HPP
#define NLSWAG_EVAL_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "nlswag/filter.hpp"
#include "nlswag/grid.hpp"
#include "nlswag/simulate.hpp"

namespace nlswag {

// Per-pixel circular error statistics across trials.
//   bias = arg sum_t exp(j e_t),  std = sqrt(-2 ln |mean_t exp(j e_t)|)
// with e_t = wrap(estimate_t - truth).  Pixels whose resultant length is
// ~0 get the sentinel std and are counted in flagged_pixels.
struct TrialStats {
    RealRaster bias;  // Semantic::Phase (circular mean error)
    RealRaster std;   // Semantic::Generic, radians
    double mean_std = 0.0;
    double mean_abs_bias = 0.0;
    double max_abs_bias = 0.0;
    int trials = 0;
    int flagged_pixels = 0;

    static constexpr double kStdSentinel = 1.0e6;
};

TrialStats circular_stats(const std::vector<RealRaster>& estimates, const RealRaster& truth);

// Incremental accumulator equivalent to circular_stats (same math, no
// retained per-trial rasters).
class CircularAccumulator {
  public:
    explicit CircularAccumulator(const RealRaster& truth);
    void add(const RealRaster& estimate);
    TrialStats finish() const;

  private:
    RealRaster truth_;
    std::vector<double> sum_re_, sum_im_;
    int trials_ = 0;
};

struct MethodSpec {
    std::string name;  // "boxcar5" | "stage1" | "nlswag" | "nlswag_nocomp"
    int boxcar_k = 5;
};

struct ExperimentConfig {
    GridShape shape{256, 256};
    int trials = 200;
    std::uint64_t seed = 1;
    std::uint64_t scene_seed = 7;
    double coherence = 0.7;
    std::vector<MethodSpec> methods;
    FilterParams params{};
    const XiTable* xi_table = nullptr;
    std::string out_dir;      // empty = no files
    bool paper_scale = false; // 10000 trials
    int margin = 12;          // border margin for interior metrics
};

struct MetricRow {
    std::string experiment;
    std::string method;
    double condition = 0.0;  // frequency for slope sweeps, 0 otherwise
    double std_rad = 0.0;
    double enl = 0.0;
    double max_abs_bias = 0.0;
    double std_interior = 0.0;
};

struct ExperimentReport {
    std::string experiment;
    std::vector<MetricRow> rows;
    std::vector<std::string> files;
};

// Phase ramps of different inclinations (range direction), one row per
// (frequency, method).
ExperimentReport slope_sweep(const std::vector<double>& frequencies, const ExperimentConfig& cfg);

// Phase step response; per-column mean/std profiles across trials.
struct StepProfile {
    std::vector<double> mean_phase;  // circular mean per column
    std::vector<double> std_phase;   // mean circular std per column
};

struct StepReport {
    ExperimentReport report;
    std::vector<std::pair<std::string, StepProfile>> profiles;  // per method
};

// variant: false = plain step (gamma 0.7 both sides, equal intensity),
// true = coherence 0.6 -> 0.8 with a 6 dB intensity jump.
StepReport step_response(bool variant, const ExperimentConfig& cfg);

// Fixed fractal truth, repeated noise draws; per-method stats and rasters.
struct FractalReport {
    ExperimentReport report;
    std::vector<std::pair<std::string, TrialStats>> stats;  // per method
    double boxcar_seconds = 0.0;  // single-threaded simulate+boxcar time
};

FractalReport fractal_experiment(const ExperimentConfig& cfg, const FractalOptions& fractal = {});

// 8-bit grayscale snapshot (binary PGM, P5).  Phase rasters stretch over
// (-pi, pi]; other rasters stretch min..max (constant maps to mid-gray).
void render_raster(const RealRaster& raster, const std::string& path);

void write_metrics_csv(const ExperimentReport& report, const std::string& path);

}  // namespace nlswag

#endif
