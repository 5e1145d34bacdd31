// SPDX-License-Identifier: Apache-2.0

#include "nlswag/eval.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "nlswag/boxcar.hpp"
#include "nlswag/simulate.hpp"

namespace nlswag {

namespace {

constexpr double kResultantFloor = 1e-12;

EstimateBundle run_method(const MethodSpec& m, const SlcPair& pair, const ExperimentConfig& cfg) {
    if (m.name == "boxcar" || m.name == "boxcar5") return boxcar(pair, m.boxcar_k);
    if (m.name == "stage1") return stage1_filter(pair, cfg.params).bundle;
    if (m.name == "nlswag") {
        FilterParams p = cfg.params;
        p.fringe_compensation = true;
        return nlswag(pair, p, cfg.xi_table).bundle;
    }
    if (m.name == "nlswag_nocomp") {
        FilterParams p = cfg.params;
        p.fringe_compensation = false;
        return nlswag(pair, p, cfg.xi_table).bundle;
    }
    throw ConfigError("unknown method: " + m.name);
}

double mean_of(const RealRaster& r) {
    double s = 0.0;
    for (double v : r.values()) s += v;
    return s / double(r.shape().size());
}

double interior_mean(const RealRaster& r, int margin) {
    const int R = r.rows(), C = r.cols();
    if (R <= 2 * margin || C <= 2 * margin) return mean_of(r);
    double s = 0.0;
    std::int64_t n = 0;
    for (int i = margin; i < R - margin; ++i)
        for (int j = margin; j < C - margin; ++j) {
            s += r.at(i, j);
            ++n;
        }
    return s / double(n);
}

double interior_max_abs(const RealRaster& r, int margin) {
    const int R = r.rows(), C = r.cols();
    const int m = (R > 2 * margin && C > 2 * margin) ? margin : 0;
    double mx = 0.0;
    for (int i = m; i < R - m; ++i)
        for (int j = m; j < C - m; ++j) mx = std::max(mx, std::abs(r.at(i, j)));
    return mx;
}

int effective_trials(const ExperimentConfig& cfg) { return cfg.paper_scale ? 10000 : cfg.trials; }

}  // namespace

CircularAccumulator::CircularAccumulator(const RealRaster& truth)
    : truth_(truth),
      sum_re_(std::size_t(truth.shape().size()), 0.0),
      sum_im_(std::size_t(truth.shape().size()), 0.0) {}

void CircularAccumulator::add(const RealRaster& estimate) {
    require_same_shape(truth_.shape(), estimate.shape());
    const auto& t = truth_.values();
    const auto& e = estimate.values();
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double err = wrap_phase(e[i] - t[i]);
        sum_re_[i] += std::cos(err);
        sum_im_[i] += std::sin(err);
    }
    ++trials_;
}

TrialStats CircularAccumulator::finish() const {
    if (trials_ < 1) throw ValueError("circular statistics need at least one trial");
    TrialStats st;
    st.trials = trials_;
    st.bias = RealRaster(truth_.shape(), Semantic::Phase);
    st.std = RealRaster(truth_.shape(), Semantic::Generic);
    auto& bias = st.bias.values();
    auto& dev = st.std.values();
    double acc_std = 0.0, acc_bias = 0.0;
    for (std::size_t i = 0; i < sum_re_.size(); ++i) {
        const double rlen = std::hypot(sum_re_[i], sum_im_[i]) / double(trials_);
        bias[i] = principal_arg(sum_im_[i], sum_re_[i]);
        if (rlen < kResultantFloor) {
            dev[i] = TrialStats::kStdSentinel;
            ++st.flagged_pixels;
        } else {
            dev[i] = std::sqrt(std::max(0.0, -2.0 * std::log(std::min(rlen, 1.0))));
        }
        acc_std += dev[i];
        acc_bias += std::abs(bias[i]);
        st.max_abs_bias = std::max(st.max_abs_bias, std::abs(bias[i]));
    }
    st.mean_std = acc_std / double(sum_re_.size());
    st.mean_abs_bias = acc_bias / double(sum_re_.size());
    return st;
}

TrialStats circular_stats(const std::vector<RealRaster>& estimates, const RealRaster& truth) {
    if (estimates.empty()) throw ValueError("circular statistics need at least one trial");
    CircularAccumulator acc(truth);
    for (const auto& e : estimates) acc.add(e);
    return acc.finish();
}

ExperimentReport slope_sweep(const std::vector<double>& frequencies, const ExperimentConfig& cfg) {
    ExperimentReport rep;
    rep.experiment = "slope";
    const int trials = effective_trials(cfg);
    for (double f : frequencies) {
        SceneSpec scene = make_ramp(cfg.shape, f, 0.0, cfg.coherence, 1.0);
        for (const auto& m : cfg.methods) {
            CircularAccumulator acc(scene.true_phase);
            double enl_sum = 0.0;
            for (int t = 0; t < trials; ++t) {
                SlcPair pair = sample_slc_pair(scene, SimSeed{cfg.seed, std::uint32_t(t)});
                EstimateBundle est = run_method(m, pair, cfg);
                acc.add(est.phase);
                enl_sum += interior_mean(est.enl, cfg.margin);
            }
            TrialStats st = acc.finish();
            MetricRow row;
            row.experiment = rep.experiment;
            row.method = m.name;
            row.condition = f;
            row.std_rad = interior_mean(st.std, cfg.margin);
            row.std_interior = row.std_rad;
            row.enl = enl_sum / trials;
            row.max_abs_bias = interior_max_abs(st.bias, cfg.margin);
            rep.rows.push_back(row);
        }
    }
    if (!cfg.out_dir.empty()) {
        std::filesystem::create_directories(cfg.out_dir);
        const std::string path = cfg.out_dir + "/slope_metrics.csv";
        write_metrics_csv(rep, path);
        rep.files.push_back(path);
    }
    return rep;
}

StepReport step_response(bool variant, const ExperimentConfig& cfg) {
    StepReport out;
    out.report.experiment = variant ? "step_variant" : "step";
    const int trials = effective_trials(cfg);

    StepOptions opt;
    if (variant) {
        opt.left_coherence = 0.6;
        opt.right_coherence = 0.8;
        opt.intensity_ratio = std::pow(10.0, 6.0 / 10.0);
    } else {
        opt.left_coherence = cfg.coherence;
        opt.right_coherence = cfg.coherence;
    }
    SceneSpec scene = make_step(cfg.shape, opt);

    for (const auto& m : cfg.methods) {
        CircularAccumulator acc(scene.true_phase);
        double enl_sum = 0.0;
        for (int t = 0; t < trials; ++t) {
            SlcPair pair = sample_slc_pair(scene, SimSeed{cfg.seed, std::uint32_t(t)});
            EstimateBundle est = run_method(m, pair, cfg);
            acc.add(est.phase);
            enl_sum += interior_mean(est.enl, cfg.margin);
        }
        TrialStats st = acc.finish();

        // column profiles: circular mean of bias + truth, row-averaged std
        StepProfile prof;
        const int R = cfg.shape.rows, C = cfg.shape.cols;
        prof.mean_phase.resize(std::size_t(C));
        prof.std_phase.resize(std::size_t(C));
        for (int c = 0; c < C; ++c) {
            double re = 0.0, im = 0.0, s = 0.0;
            for (int r = 0; r < R; ++r) {
                const double mean_err = st.bias.at(r, c);
                const double truth = scene.true_phase.at(r, c);
                re += std::cos(mean_err + truth);
                im += std::sin(mean_err + truth);
                s += st.std.at(r, c);
            }
            prof.mean_phase[std::size_t(c)] = principal_arg(im, re);
            prof.std_phase[std::size_t(c)] = s / double(R);
        }
        out.profiles.emplace_back(m.name, std::move(prof));

        MetricRow row;
        row.experiment = out.report.experiment;
        row.method = m.name;
        row.std_rad = st.mean_std;
        row.std_interior = interior_mean(st.std, cfg.margin);
        row.enl = enl_sum / trials;
        row.max_abs_bias = interior_max_abs(st.bias, cfg.margin);
        out.report.rows.push_back(row);
    }

    if (!cfg.out_dir.empty()) {
        std::filesystem::create_directories(cfg.out_dir);
        const std::string mpath = cfg.out_dir + "/" + out.report.experiment + "_metrics.csv";
        write_metrics_csv(out.report, mpath);
        out.report.files.push_back(mpath);
        const std::string ppath = cfg.out_dir + "/" + out.report.experiment + "_profile.csv";
        std::ofstream f(ppath, std::ios::trunc);
        f << "column,method,mean_phase_rad,std_phase_rad\n";
        f.precision(17);
        for (const auto& [name, prof] : out.profiles)
            for (std::size_t c = 0; c < prof.mean_phase.size(); ++c)
                f << c << "," << name << "," << prof.mean_phase[c] << "," << prof.std_phase[c] << "\n";
        out.report.files.push_back(ppath);
    }
    return out;
}

FractalReport fractal_experiment(const ExperimentConfig& cfg, const FractalOptions& fractal) {
    FractalReport out;
    out.report.experiment = "fractal";
    const int trials = effective_trials(cfg);

    FractalOptions fopt = fractal;
    fopt.coherence = cfg.coherence;
    SceneSpec scene = make_fractal(cfg.shape, cfg.scene_seed, fopt);

    for (const auto& m : cfg.methods) {
        CircularAccumulator acc(scene.true_phase);
        double enl_sum = 0.0;
        const bool is_boxcar = m.name.rfind("boxcar", 0) == 0;
        const auto t0 = std::chrono::steady_clock::now();
        for (int t = 0; t < trials; ++t) {
            SlcPair pair = sample_slc_pair(scene, SimSeed{cfg.seed, std::uint32_t(t)});
            EstimateBundle est = run_method(m, pair, cfg);
            acc.add(est.phase);
            enl_sum += mean_of(est.enl);
        }
        if (is_boxcar)
            out.boxcar_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        TrialStats st = acc.finish();

        MetricRow row;
        row.experiment = out.report.experiment;
        row.method = m.name;
        row.std_rad = st.mean_std;
        row.std_interior = interior_mean(st.std, cfg.margin);
        row.enl = enl_sum / trials;
        row.max_abs_bias = interior_max_abs(st.bias, 10);
        out.report.rows.push_back(row);
        out.stats.emplace_back(m.name, std::move(st));
    }

    if (!cfg.out_dir.empty()) {
        std::filesystem::create_directories(cfg.out_dir);
        const std::string mpath = cfg.out_dir + "/fractal_metrics.csv";
        write_metrics_csv(out.report, mpath);
        out.report.files.push_back(mpath);
        render_raster(scene.true_phase, cfg.out_dir + "/fractal_truth_phase.pgm");
        out.report.files.push_back(cfg.out_dir + "/fractal_truth_phase.pgm");
        for (const auto& [name, st] : out.stats) {
            const std::string b = cfg.out_dir + "/fractal_" + name;
            render_raster(st.bias, b + "_bias.pgm");
            render_raster(st.std, b + "_std.pgm");
            out.report.files.push_back(b + "_bias.pgm");
            out.report.files.push_back(b + "_std.pgm");
        }
    }
    return out;
}

void render_raster(const RealRaster& raster, const std::string& path) {
    const auto& v = raster.values();
    double lo, hi;
    if (raster.semantic() == Semantic::Phase) {
        lo = -kPi;
        hi = kPi;
    } else {
        lo = hi = v.empty() ? 0.0 : v[0];
        for (double x : v) {
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw MissingFileError("cannot open for write: " + path);
    f << "P5\n" << raster.cols() << " " << raster.rows() << "\n255\n";
    std::vector<unsigned char> row(std::size_t(raster.cols()));
    const double scale = hi > lo ? 255.0 / (hi - lo) : 0.0;
    std::size_t i = 0;
    for (int r = 0; r < raster.rows(); ++r) {
        for (int c = 0; c < raster.cols(); ++c, ++i) {
            const double g = hi > lo ? (v[i] - lo) * scale : 128.0;
            row[std::size_t(c)] = static_cast<unsigned char>(std::clamp(std::lround(g), 0L, 255L));
        }
        f.write(reinterpret_cast<const char*>(row.data()), raster.cols());
    }
    if (!f) throw Error("short write: " + path);
}

void write_metrics_csv(const ExperimentReport& report, const std::string& path) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw MissingFileError("cannot open for write: " + path);
    if (report.experiment == "slope") {
        f << "freq_rad_per_px,method,std_rad,enl\n";
        f.precision(17);
        for (const auto& r : report.rows)
            f << r.condition << "," << r.method << "," << r.std_rad << "," << r.enl << "\n";
    } else {
        f << "experiment,method,std_rad,enl,max_abs_bias_rad,std_interior_rad\n";
        f.precision(17);
        for (const auto& r : report.rows)
            f << r.experiment << "," << r.method << "," << r.std_rad << "," << r.enl << ","
              << r.max_abs_bias << "," << r.std_interior << "\n";
    }
}

}  // namespace nlswag
