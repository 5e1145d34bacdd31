// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nlswag/adaptivity.hpp"
#include "nlswag/boxcar.hpp"
#include "nlswag/config.hpp"
#include "nlswag/eval.hpp"
#include "nlswag/filter.hpp"
#include "nlswag/interferogram.hpp"
#include "nlswag/raster_io.hpp"
#include "nlswag/simulate.hpp"

namespace {

using namespace nlswag;

void write_scene(const SceneSpec& scene, const std::string& prefix) {
    write_raster(scene.amplitude, prefix + "_amplitude");
    write_raster(scene.coherence, prefix + "_coherence");
    write_raster(scene.true_phase, prefix + "_phase");
}

SceneSpec read_scene(const std::string& prefix) {
    SceneSpec s{read_real_raster(prefix + "_amplitude", true),
                read_real_raster(prefix + "_coherence", true),
                read_real_raster(prefix + "_phase", true)};
    s.validate();
    return s;
}

void write_bundle(const EstimateBundle& b, const std::string& prefix) {
    write_raster(b.phase, prefix + "_phase");
    write_raster(b.intensity, prefix + "_intensity");
    write_raster(b.coherence, prefix + "_coherence");
    write_raster(b.enl, prefix + "_enl");
}

std::vector<MethodSpec> parse_methods(const std::string& csv, int boxcar_k) {
    std::vector<MethodSpec> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(MethodSpec{tok, boxcar_k});
    }
    if (out.empty()) throw ConfigError("no methods selected");
    return out;
}

struct CommonFilterFlags {
    std::string config_path;
    std::string method;
    int boxcar_k = 0;
    int threads = -1;
    std::string kernel;
    double h1 = 0.0, h2 = 0.0;
    int search_half = 0;
    bool no_comp = false;
    std::string xi_table;
};

void add_filter_flags(CLI::App* cmd, CommonFilterFlags& f) {
    cmd->add_option("--config", f.config_path, "key = value configuration file; flags override it");
    cmd->add_option("--threads", f.threads, "worker threads (0 = all hardware threads)");
    cmd->add_option("--kernel", f.kernel, "kernel variant: auto|scalar|avx2");
    cmd->add_option("--h1", f.h1, "stage-1 kernel bandwidth (default 4)");
    cmd->add_option("--h2", f.h2, "stage-2 kernel bandwidth (default 2)");
    cmd->add_option("--search-half", f.search_half, "search window half width (default 10)");
    cmd->add_flag("--no-fringe-comp", f.no_comp, "disable fringe compensation");
    cmd->add_option("--xi-table", f.xi_table, "calibration table file (overrides the embedded one)");
}

RunConfig resolve_config(const CommonFilterFlags& f) {
    RunConfig cfg;
    if (!f.config_path.empty()) cfg = RunConfig::from_file(f.config_path);
    if (!f.method.empty()) cfg.method = f.method;
    if (f.boxcar_k > 0) cfg.boxcar_k = f.boxcar_k;
    if (f.threads >= 0) cfg.params.threads = f.threads;
    if (!f.kernel.empty()) cfg.params.kernel = kernels::parse_variant(f.kernel);
    if (f.h1 > 0.0) cfg.params.h1 = f.h1;
    if (f.h2 > 0.0) cfg.params.h2 = f.h2;
    if (f.search_half > 0) cfg.params.search_half = f.search_half;
    if (f.no_comp) cfg.params.fringe_compensation = false;
    if (!f.xi_table.empty()) cfg.xi_table_path = f.xi_table;
    cfg.validate();
    return cfg;
}

int run(int argc, char** argv) {
    CLI::App app{"nlswag: nonlocal InSAR phase filtering, simulation and evaluation"};
    app.require_subcommand(1);
    app.get_formatter()->column_width(40);

    // ---------------- simulate ----------------
    auto* sim = app.add_subcommand("simulate", "generate scene truths and sample SLC pairs");
    sim->require_subcommand(1);

    int rows = 256, cols = 256;
    double coherence = 0.7, amplitude = 1.0;
    std::string out_prefix;

    auto* ramp = sim->add_subcommand("ramp", "linear phase ramp scene");
    double f_range = 0.0, f_az = 0.0;
    ramp->add_option("--rows", rows)->capture_default_str();
    ramp->add_option("--cols", cols)->capture_default_str();
    ramp->add_option("--f-range", f_range, "range frequency, rad/pixel")->capture_default_str();
    ramp->add_option("--f-az", f_az, "azimuth frequency, rad/pixel")->capture_default_str();
    ramp->add_option("--coherence", coherence)->capture_default_str();
    ramp->add_option("--amplitude", amplitude)->capture_default_str();
    ramp->add_option("--out-prefix", out_prefix)->required();

    auto* step = sim->add_subcommand("step", "vertical phase step scene");
    double left_phase = -kPi / 3.0, right_phase = kPi / 3.0;
    double left_coh = 0.7, right_coh = 0.7, intensity_db = 0.0;
    step->add_option("--rows", rows)->capture_default_str();
    step->add_option("--cols", cols)->capture_default_str();
    step->add_option("--left-phase", left_phase)->capture_default_str();
    step->add_option("--right-phase", right_phase)->capture_default_str();
    step->add_option("--left-coherence", left_coh)->capture_default_str();
    step->add_option("--right-coherence", right_coh)->capture_default_str();
    step->add_option("--intensity-db", intensity_db, "right/left intensity jump in dB")
        ->capture_default_str();
    step->add_option("--out-prefix", out_prefix)->required();

    auto* frac = sim->add_subcommand("fractal", "midpoint-displacement fractal scene");
    int size = 257, grid = 0;
    std::uint64_t scene_seed = 7;
    double roughness = 1.0, span = 6.0 * kPi;
    frac->add_option("--size", size, "square scene size")->capture_default_str();
    frac->add_option("--grid", grid, "fractal grid size 2^k+1 (0 = auto)")->capture_default_str();
    frac->add_option("--seed", scene_seed)->capture_default_str();
    frac->add_option("--roughness", roughness)->capture_default_str();
    frac->add_option("--span", span, "unwrapped phase span in radians")->capture_default_str();
    frac->add_option("--coherence", coherence)->capture_default_str();
    frac->add_option("--out-prefix", out_prefix)->required();

    auto* sample = sim->add_subcommand("sample", "draw an SLC pair from a scene");
    std::string scene_prefix;
    std::uint64_t seed = 1;
    unsigned trial = 0;
    sample->add_option("--scene-prefix", scene_prefix)->required();
    sample->add_option("--seed", seed)->capture_default_str();
    sample->add_option("--trial", trial)->capture_default_str();
    sample->add_option("--out-prefix", out_prefix)->required();

    // ---------------- filter ----------------
    auto* filt = app.add_subcommand("filter", "filter an SLC pair into an estimate bundle");
    std::string master_path, slave_path;
    CommonFilterFlags ff;
    bool dump_eta = false, dump_fringe = false, dump_enl = false;
    filt->add_option("--master", master_path)->required();
    filt->add_option("--slave", slave_path)->required();
    filt->add_option("--method", ff.method, "boxcar|stage1|nlswag (default nlswag)");
    filt->add_option("--k", ff.boxcar_k, "boxcar window size, odd (default 5)");
    add_filter_flags(filt, ff);
    filt->add_flag("--dump-eta", dump_eta, "also write the heterogeneity raster");
    filt->add_flag("--dump-fringe", dump_fringe, "also write the fringe frequency rasters");
    filt->add_flag("--dump-enl", dump_enl, "also write the stage-1 guidance ENL raster");
    filt->add_option("--out-prefix", out_prefix)->required();

    // ---------------- calibrate ----------------
    auto* cal = app.add_subcommand("calibrate", "regenerate the xi calibration table");
    std::string cal_out = "xi_calibration.txt";
    std::uint64_t cal_seed = 20240901;
    int cal_size = 128, cal_pairs = 20000;
    std::vector<double> cal_levels{0.3, 0.5, 0.7, 0.9};
    cal->add_option("--out", cal_out)->capture_default_str();
    cal->add_option("--seed", cal_seed)->capture_default_str();
    cal->add_option("--size", cal_size, "calibration scene size")->capture_default_str();
    cal->add_option("--pairs", cal_pairs, "pixel pairs per window width")->capture_default_str();
    cal->add_option("--levels", cal_levels, "coherence levels")->expected(-1);

    // ---------------- eval ----------------
    auto* eval = app.add_subcommand("eval", "Monte-Carlo experiments");
    eval->require_subcommand(1);
    std::string out_dir = "eval_out";
    std::string methods_csv = "boxcar5,nlswag";
    int trials = 0;
    bool paper_scale = false;
    std::uint64_t eval_seed = 1, eval_scene_seed = 7;
    CommonFilterFlags ef;

    auto add_eval_common = [&](CLI::App* cmd, int default_trials) {
        cmd->add_option("--out-dir", out_dir)->capture_default_str();
        cmd->add_option("--methods", methods_csv, "comma-separated method list")->capture_default_str();
        cmd->add_option("--trials", trials,
                        "trial count (default " + std::to_string(default_trials) + ")");
        cmd->add_flag("--paper-scale", paper_scale, "use 10000 trials");
        cmd->add_option("--seed", eval_seed)->capture_default_str();
        cmd->add_option("--scene-seed", eval_scene_seed)->capture_default_str();
        cmd->add_option("--rows", rows)->capture_default_str();
        cmd->add_option("--cols", cols)->capture_default_str();
        cmd->add_option("--coherence", coherence)->capture_default_str();
        add_filter_flags(cmd, ef);
    };

    auto* ev_slope = eval->add_subcommand("slope", "phase ramp inclination sweep");
    std::vector<double> frequencies{0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5};
    ev_slope->add_option("--frequencies", frequencies, "range frequencies, rad/pixel")->expected(-1);
    add_eval_common(ev_slope, 25);

    auto* ev_step = eval->add_subcommand("step", "phase step response profiles");
    bool variant = false;
    ev_step->add_flag("--variant", variant, "coherence 0.6->0.8 step with a 6 dB intensity jump");
    add_eval_common(ev_step, 1000);

    auto* ev_frac = eval->add_subcommand("fractal", "fractal terrain Monte-Carlo");
    double ev_span = 6.0 * kPi, ev_rough = 1.0;
    ev_frac->add_option("--span", ev_span)->capture_default_str();
    ev_frac->add_option("--roughness", ev_rough)->capture_default_str();
    add_eval_common(ev_frac, 200);

    CLI11_PARSE(app, argc, argv);

    // ---------------- dispatch ----------------
    if (ramp->parsed() || step->parsed() || frac->parsed()) {
        SceneSpec scene;
        if (ramp->parsed()) {
            scene = make_ramp({rows, cols}, f_range, f_az, coherence, amplitude);
        } else if (step->parsed()) {
            StepOptions so;
            so.left_phase = left_phase;
            so.right_phase = right_phase;
            so.left_coherence = left_coh;
            so.right_coherence = right_coh;
            so.intensity_ratio = std::pow(10.0, intensity_db / 10.0);
            scene = make_step({rows, cols}, so);
        } else {
            FractalOptions fo;
            fo.roughness = roughness;
            fo.phase_span = span;
            fo.coherence = coherence;
            fo.grid_size = grid;
            scene = make_fractal({size, size}, scene_seed, fo);
        }
        write_scene(scene, out_prefix);
        std::cout << "wrote scene rasters: " << out_prefix << "_{amplitude,coherence,phase}\n";
        return 0;
    }
    if (sample->parsed()) {
        SceneSpec scene = read_scene(scene_prefix);
        SlcPair pair = sample_slc_pair(scene, SimSeed{seed, trial});
        write_raster(pair.master, out_prefix + "_master");
        write_raster(pair.slave, out_prefix + "_slave");
        std::cout << "wrote SLC pair: " << out_prefix << "_{master,slave}\n";
        return 0;
    }
    if (filt->parsed()) {
        RunConfig cfg = resolve_config(ff);
        SlcPair pair{read_complex_raster(master_path), read_complex_raster(slave_path)};
        pair.require_consistent();
        if (cfg.method == "boxcar") {
            write_bundle(boxcar(pair, cfg.boxcar_k), out_prefix);
        } else if (cfg.method == "stage1") {
            Stage1Output s1 = stage1_filter(pair, cfg.params);
            write_bundle(s1.bundle, out_prefix);
            if (dump_eta) write_raster(s1.eta, out_prefix + "_eta");
            if (dump_enl) write_raster(s1.center_enl, out_prefix + "_enl_stage1");
            if (dump_fringe) {
                FringeField fr =
                    estimate_fringe_field(form_interferogram(pair), cfg.params.fringe_block,
                                          cfg.params.fringe_fft, cfg.params.sigma_smooth);
                write_raster(fr.f_range, out_prefix + "_fringe_range");
                write_raster(fr.f_azimuth, out_prefix + "_fringe_azimuth");
            }
        } else {
            XiTable table = cfg.xi_table_path.empty() ? XiTable::embedded_default()
                                                      : XiTable::load(cfg.xi_table_path);
            NlswagResult res = nlswag::nlswag(pair, cfg.params, &table);
            write_bundle(res.bundle, out_prefix);
            if (dump_eta) write_raster(res.stage1.eta, out_prefix + "_eta");
            if (dump_enl) write_raster(res.stage1.bundle.enl, out_prefix + "_enl_stage1");
            if (dump_fringe) {
                write_raster(res.fringe.f_range, out_prefix + "_fringe_range");
                write_raster(res.fringe.f_azimuth, out_prefix + "_fringe_azimuth");
            }
        }
        std::cout << "wrote estimate bundle: " << out_prefix << "_{phase,intensity,coherence,enl}\n";
        return 0;
    }
    if (cal->parsed()) {
        const std::vector<double> grid_sigmas{1.0, 1.5, 2.0, 2.5, 3.0};
        XiTable table;
        for (double level : cal_levels) {
            XiCalibrationOptions opt;
            opt.scene_shape = {cal_size, cal_size};
            opt.pair_count = cal_pairs;
            XiCalibration c = calibrate_xi(level, grid_sigmas, cal_seed, opt);
            table.rows.push_back({level, c.coeffs});
            std::cout << "gamma " << level << ": c0=" << c.coeffs[0] << " c1=" << c.coeffs[1]
                      << " c2=" << c.coeffs[2] << "\n";
        }
        table.save(cal_out);
        std::cout << "wrote calibration table: " << cal_out << "\n";
        return 0;
    }
    if (ev_slope->parsed() || ev_step->parsed() || ev_frac->parsed()) {
        RunConfig base = resolve_config(ef);
        ExperimentConfig cfg;
        cfg.shape = {rows, cols};
        cfg.seed = eval_seed;
        cfg.scene_seed = eval_scene_seed;
        cfg.coherence = coherence;
        cfg.params = base.params;
        cfg.paper_scale = paper_scale;
        cfg.out_dir = out_dir;
        cfg.methods = parse_methods(methods_csv, base.boxcar_k);
        XiTable table = base.xi_table_path.empty() ? XiTable::embedded_default()
                                                   : XiTable::load(base.xi_table_path);
        cfg.xi_table = &table;

        ExperimentReport rep;
        if (ev_slope->parsed()) {
            cfg.trials = trials > 0 ? trials : 25;
            rep = slope_sweep(frequencies, cfg);
        } else if (ev_step->parsed()) {
            cfg.trials = trials > 0 ? trials : 1000;
            rep = step_response(variant, cfg).report;
        } else {
            cfg.trials = trials > 0 ? trials : 200;
            FractalOptions fo;
            fo.phase_span = ev_span;
            fo.roughness = ev_rough;
            rep = fractal_experiment(cfg, fo).report;
        }
        for (const auto& f : rep.files) std::cout << "wrote " << f << "\n";
        for (const auto& r : rep.rows)
            std::cout << r.experiment << " " << r.method << " cond=" << r.condition
                      << " std=" << r.std_rad << " enl=" << r.enl << "\n";
        return 0;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const nlswag::MissingFileError& e) {
        std::cerr << "error: missing-file: " << e.what() << "\n";
        return 2;
    } catch (const nlswag::ConfigError& e) {
        std::cerr << "error: invalid-config: " << e.what() << "\n";
        return 3;
    } catch (const nlswag::ShapeError& e) {
        std::cerr << "error: shape-mismatch: " << e.what() << "\n";
        return 4;
    } catch (const nlswag::Error& e) {
        std::cerr << "error: invalid-input: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << "\n";
        return 1;
    }
}
