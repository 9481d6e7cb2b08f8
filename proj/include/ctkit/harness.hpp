#pragma once

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <string>
#include <vector>

#include <json.hpp>

#include "ctkit/cgne.hpp"
#include "ctkit/config.hpp"
#include "ctkit/fbp.hpp"
#include "ctkit/io/grid.hpp"
#include "ctkit/io/png.hpp"
#include "ctkit/metrics.hpp"
#include "ctkit/noise.hpp"
#include "ctkit/phantom.hpp"
#include "ctkit/prior_sampling.hpp"
#include "ctkit/projector.hpp"
#include "ctkit/solver.hpp"

namespace ctkit {

// Output directories resolve against $CTKIT_OUTPUT_ROOT when set.
inline std::filesystem::path resolve_output_dir(const ExperimentConfig& cfg) {
    std::filesystem::path dir = cfg.output_dir;
    if (const char* root = std::getenv("CTKIT_OUTPUT_ROOT"); root && dir.is_relative())
        dir = std::filesystem::path(root) / dir;
    return dir;
}

inline Image build_phantom(const ExperimentConfig& cfg) {
    return phantom_preset(cfg.phantom.kind, cfg.phantom.size, cfg.phantom.extent);
}

inline ParallelGeometry make_parallel_geometry(const ExperimentConfig& cfg) {
    const int nd = cfg.geometry.num_detectors > 0
                       ? cfg.geometry.num_detectors
                       : static_cast<int>(std::ceil(std::numbers::sqrt2 * cfg.phantom.size));
    const double sp = cfg.geometry.detector_spacing > 0.0
                          ? cfg.geometry.detector_spacing
                          : cfg.phantom.extent / cfg.phantom.size;
    return ParallelGeometry::uniform(cfg.geometry.num_angles, nd, sp);
}

inline FanGeometry make_fan_geometry(const ExperimentConfig& cfg) {
    const int nd = cfg.geometry.num_detectors > 0 ? cfg.geometry.num_detectors
                                                  : cfg.phantom.size;
    const double sp = cfg.geometry.detector_pixel_spacing > 0.0
                          ? cfg.geometry.detector_pixel_spacing
                          : 2.0 * cfg.phantom.extent / nd;
    return FanGeometry::uniform(cfg.geometry.num_angles, cfg.geometry.source_distance,
                                cfg.geometry.detector_distance, nd, sp);
}

inline ProjectionMatrix build_projector(const ExperimentConfig& cfg, const GridSpec& grid) {
    return cfg.geometry.kind == GeometryKind::parallel
               ? ProjectionMatrix::parallel(grid, make_parallel_geometry(cfg))
               : ProjectionMatrix::fan(grid, make_fan_geometry(cfg));
}

struct SimulateResult {
    double realized_snr_db = 0.0;
    double counts_scale = 1.0;   // 1 for gaussian; photon scaling for poisson
    std::filesystem::path dir;
};

// Writes ground truth, clean and noisy sinograms, preview PNGs, and a JSON
// report with the realized SNR and (for Poisson) the photon scaling.
inline SimulateResult cmd_simulate(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto dir = resolve_output_dir(cfg);
    std::filesystem::create_directories(dir);

    const Image truth = build_phantom(cfg);
    const auto A = build_projector(cfg, GridSpec::of(truth));
    Sinogram clean = A.forward(truth);

    SimulateResult res;
    res.dir = dir;
    Sinogram noisy;
    if (cfg.noise.kind == NoiseKind::gaussian) {
        noisy = add_gaussian_noise(clean, cfg.noise.sigma, cfg.noise.seed);
    } else {
        double mean = 0.0;
        for (double v : clean.values) mean += v;
        mean /= static_cast<double>(clean.values.size());
        if (!(mean > 0.0)) throw NumericError("simulate: clean sinogram has zero mean");
        res.counts_scale = cfg.noise.target_mean_counts / mean;
        for (auto& v : clean.values) v *= res.counts_scale;
        noisy = sample_poisson(clean, cfg.noise.seed);
    }
    res.realized_snr_db = realized_snr_db(clean, noisy);

    write_grid((dir / "truth.grid").string(), truth);
    write_grid((dir / "sino_clean.grid").string(), clean,
               A.num_detectors() * (cfg.geometry.kind == GeometryKind::parallel
                                        ? make_parallel_geometry(cfg).detector_spacing
                                        : make_fan_geometry(cfg).detector_pixel_spacing));
    write_grid((dir / "sino_noisy.grid").string(), noisy, 0.0);
    write_png_gray((dir / "truth.png").string(), truth, 0.0, 1.0);
    {
        const auto [mn, mx] = std::minmax_element(noisy.values.begin(), noisy.values.end());
        Image view(noisy.num_detectors, noisy.num_angles, 1.0);
        view.values = noisy.values;
        write_png_gray((dir / "sino_noisy.png").string(), view, *mn, *mx > *mn ? *mx : *mn + 1);
    }

    nlohmann::json report = {
        {"realized_snr_db", res.realized_snr_db},
        {"counts_scale", res.counts_scale},
        {"noise", to_string(cfg.noise.kind)},
        {"sigma", cfg.noise.sigma},
        {"seed", cfg.noise.seed},
        {"num_angles", cfg.geometry.num_angles},
        {"num_detectors", A.num_detectors()},
        {"geometry", to_string(cfg.geometry.kind)},
        {"phantom", cfg.phantom.kind},
        {"size", cfg.phantom.size},
    };
    std::ofstream rf(dir / "simulate_report.json");
    rf << report.dump(2) << "\n";
    if (!rf) throw IoError("write failed: " + (dir / "simulate_report.json").string());
    save_config((dir / "experiment.ini").string(), cfg);
    return res;
}

struct SummaryRow {
    std::string method;
    uint64_t seed = 0;
    int num_codes = 1;
    double final_psnr = 0.0, best_psnr = 0.0;
    double final_ssim = 0.0, best_ssim = 0.0;
    double final_fidelity = 0.0, truth_fidelity = 0.0;
};

namespace detail {

inline SolverConfig make_solver_config(const ExperimentConfig& cfg, uint64_t seed,
                                       double counts_scale) {
    SolverConfig s;
    s.rho = cfg.solver.rho;
    s.lambda = cfg.solver.lambda;
    s.num_codes = cfg.solver.num_codes;
    s.iterations = cfg.solver.iterations;
    s.base_lr = cfg.solver.base_lr;
    s.lr_halving_period = cfg.solver.lr_halving_period;
    s.fidelity = cfg.solver.fidelity;
    s.seed = seed;
    s.trace_every = cfg.solver.trace_every;
    s.counts_scale = counts_scale;
    s.generator = nn::GeneratorConfig::dcgan(cfg.phantom.size);
    return s;
}

inline void write_summary_csv(const std::filesystem::path& path,
                              const std::vector<SummaryRow>& rows) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open for writing: " + path.string());
    f << "method,seed,num_codes,final_psnr,best_psnr,final_ssim,best_ssim,"
         "final_fidelity,truth_fidelity\n";
    char line[512];
    for (const auto& r : rows) {
        std::snprintf(line, sizeof(line), "%s,%llu,%d,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g\n",
                      r.method.c_str(), static_cast<unsigned long long>(r.seed), r.num_codes,
                      r.final_psnr, r.best_psnr, r.final_ssim, r.best_ssim, r.final_fidelity,
                      r.truth_fidelity);
        f << line;
    }
}

// Table 2/3 style report: "final (best)" per metric.
inline void print_summary(const std::vector<SummaryRow>& rows) {
    std::printf("%-12s %6s %3s | %18s | %15s | %12s | %10s\n", "method", "seed", "N",
                "PSNR final (best)", "SSIM final (best)", "fidelity", "truth fid");
    for (const auto& r : rows)
        std::printf("%-12s %6llu %3d | %8.2f (%8.2f) | %6.3f (%6.3f) | %12.4f | %10.4f\n",
                    r.method.c_str(), static_cast<unsigned long long>(r.seed), r.num_codes,
                    r.final_psnr, r.best_psnr, r.final_ssim, r.best_ssim, r.final_fidelity,
                    r.truth_fidelity);
}

struct LoadedSimulation {
    Image truth;
    Sinogram noisy;
    double counts_scale = 1.0;
};

inline LoadedSimulation load_simulation(const ExperimentConfig& cfg) {
    const auto dir = resolve_output_dir(cfg);
    const auto truth_path = dir / "truth.grid";
    const auto noisy_path = dir / "sino_noisy.grid";
    const auto report_path = dir / "simulate_report.json";
    if (!std::filesystem::exists(truth_path) || !std::filesystem::exists(noisy_path) ||
        !std::filesystem::exists(report_path))
        throw IoError("reconstruct: missing simulate outputs under " + dir.string() +
                      " (run simulate first)");
    LoadedSimulation sim;
    sim.truth = read_grid_image(truth_path.string());
    sim.noisy = read_grid_sinogram(noisy_path.string());
    std::ifstream rf(report_path);
    nlohmann::json report;
    rf >> report;
    sim.counts_scale = report.value("counts_scale", 1.0);
    return sim;
}

// Reconstruction must run against the geometry the data was simulated with;
// the experiment file written by simulate is authoritative for the
// phantom/geometry/noise sections, while the caller keeps control of the
// solver and output settings.
inline ExperimentConfig adopt_simulated_sections(ExperimentConfig cfg) {
    const auto saved_path = resolve_output_dir(cfg) / "experiment.ini";
    if (std::filesystem::exists(saved_path)) {
        const auto saved = load_config(saved_path.string());
        cfg.phantom = saved.phantom;
        cfg.geometry = saved.geometry;
        cfg.noise = saved.noise;
    }
    return cfg;
}

inline SummaryRow summarize_run(const std::string& method, uint64_t seed, int num_codes,
                                const RunResult& run, const Image& truth, const Sinogram& y,
                                const ProjectionMatrix& A, const SolverConfig& scfg) {
    SummaryRow row;
    row.method = method;
    row.seed = seed;
    row.num_codes = num_codes;
    row.final_psnr = run.trace.final_record().psnr;
    row.best_psnr = run.trace.best_record().psnr;
    row.final_ssim = run.trace.final_record().ssim;
    row.best_ssim = run.trace.best_record().ssim;
    row.final_fidelity = run.trace.final_record().fidelity;
    row.truth_fidelity = reconstruction_fidelity(truth, y, A, scfg);
    return row;
}

inline void write_run_images(const std::filesystem::path& dir, const std::string& stem,
                             const RunResult& run) {
    write_grid((dir / (stem + "_final.grid")).string(), run.final_image);
    write_grid((dir / (stem + "_best.grid")).string(), run.best_image);
    write_png_gray((dir / (stem + "_final.png")).string(), run.final_image);
    write_png_gray((dir / (stem + "_best.png")).string(), run.best_image);
}

} // namespace detail

// Runs the configured method for every seed; writes final/best images, the
// per-run trace CSV, and summary.csv with final and best metrics plus the
// ground-truth fidelity reference.
inline std::vector<SummaryRow> cmd_reconstruct(const ExperimentConfig& cfg_in) {
    const ExperimentConfig cfg = detail::adopt_simulated_sections(cfg_in);
    cfg.validate();
    const auto dir = resolve_output_dir(cfg);
    auto sim = detail::load_simulation(cfg);
    const auto A = build_projector(cfg, GridSpec::of(sim.truth));
    const std::string method = to_string(cfg.solver.method);

    std::vector<SummaryRow> rows;
    for (uint64_t seed : cfg.solver.seeds) {
        SolverConfig scfg = detail::make_solver_config(cfg, seed, sim.counts_scale);
        const std::string stem = method + "_seed" + std::to_string(seed);

        if (cfg.solver.method == Method::fbp || cfg.solver.method == Method::cgne) {
            // Single-shot baselines: no trace file.
            Image rec;
            if (cfg.solver.method == Method::fbp) {
                const FbpFilter filt = cfg.solver.fbp_filter == "hann" ? FbpFilter::hann
                                                                       : FbpFilter::ramp;
                rec = cfg.geometry.kind == GeometryKind::parallel
                          ? fbp(sim.noisy, make_parallel_geometry(cfg), GridSpec::of(sim.truth),
                                filt)
                          : fbp_fan(sim.noisy, make_fan_geometry(cfg), GridSpec::of(sim.truth),
                                    filt);
            } else {
                rec = cgne(sim.noisy, A, cfg.solver.cgne_iterations);
            }
            SummaryRow row;
            row.method = method;
            row.seed = seed;
            row.num_codes = 1;
            row.final_psnr = row.best_psnr = psnr(rec, sim.truth);
            row.final_ssim = row.best_ssim = ssim(rec, sim.truth);
            row.final_fidelity = reconstruction_fidelity(rec, sim.noisy, A, scfg);
            row.truth_fidelity = reconstruction_fidelity(sim.truth, sim.noisy, A, scfg);
            rows.push_back(row);
            write_grid((dir / (stem + "_final.grid")).string(), rec);
            write_png_gray((dir / (stem + "_final.png")).string(), rec);
            continue;
        }

        RunResult run;
        int num_codes = 1;
        switch (cfg.solver.method) {
            case Method::dip: run = run_dip(sim.noisy, A, scfg, &sim.truth); break;
            case Method::pnp_dip: run = run_pnp_dip(sim.noisy, A, scfg, &sim.truth); break;
            case Method::mcdip_admm:
                num_codes = scfg.num_codes;
                run = run_mcdip_admm(sim.noisy, A, scfg, &sim.truth);
                break;
            default: break;
        }
        rows.push_back(detail::summarize_run(method, seed, num_codes, run, sim.truth,
                                             sim.noisy, A, scfg));
        write_trace_csv((dir / (stem + "_trace.csv")).string(), run.trace);
        detail::write_run_images(dir, stem, run);
    }
    detail::write_summary_csv(dir / (method + "_summary.csv"), rows);
    detail::print_summary(rows);
    return rows;
}

struct SweepRow {
    int num_codes = 0;
    uint64_t seed = 0;
    std::string label;   // pnp-dip-equivalent at N = 1
    double final_psnr = 0.0, best_psnr = 0.0;
};

// Code-count sweep at fixed instance: one MCDIP-ADMM run per (N, seed),
// plus a mean-over-seeds PSNR trace per N.
inline std::vector<SweepRow> cmd_sweep_codes(const ExperimentConfig& cfg_in,
                                             std::vector<int> code_counts = {}) {
    const ExperimentConfig cfg = detail::adopt_simulated_sections(cfg_in);
    cfg.validate();
    if (cfg.solver.method != Method::mcdip_admm)
        throw ConfigError("sweep-codes requires solver.method = mcdip-admm");
    if (code_counts.empty()) code_counts = {1, 5, 10, 20, 30};
    const auto dir = resolve_output_dir(cfg);
    auto sim = detail::load_simulation(cfg);
    const auto A = build_projector(cfg, GridSpec::of(sim.truth));

    std::vector<SweepRow> rows;
    std::ofstream sweep(dir / "sweep_codes.csv");
    if (!sweep) throw IoError("cannot open for writing: " + (dir / "sweep_codes.csv").string());
    sweep << "num_codes,seed,label,final_psnr,best_psnr\n";
    for (int n : code_counts) {
        std::vector<RunTrace> traces;
        for (uint64_t seed : cfg.solver.seeds) {
            SolverConfig scfg = detail::make_solver_config(cfg, seed, sim.counts_scale);
            scfg.num_codes = n;
            auto run = run_mcdip_admm(sim.noisy, A, scfg, &sim.truth);
            SweepRow row;
            row.num_codes = n;
            row.seed = seed;
            row.label = n == 1 ? "pnp-dip-equivalent" : "mcdip-admm";
            row.final_psnr = run.trace.final_record().psnr;
            row.best_psnr = run.trace.best_record().psnr;
            rows.push_back(row);
            char line[256];
            std::snprintf(line, sizeof(line), "%d,%llu,%s,%.10g,%.10g\n", n,
                          static_cast<unsigned long long>(seed), row.label.c_str(),
                          row.final_psnr, row.best_psnr);
            sweep << line;
            traces.push_back(std::move(run.trace));
        }
        // Mean-over-seeds PSNR trajectory for this N.
        std::ofstream mt(dir / ("mean_trace_n" + std::to_string(n) + ".csv"));
        mt << "t,mean_psnr\n";
        for (size_t i = 0; i < traces.front().records.size(); ++i) {
            double acc = 0.0;
            for (const auto& tr : traces) acc += tr.records[i].psnr;
            char line[128];
            std::snprintf(line, sizeof(line), "%d,%.10g\n", traces.front().records[i].t,
                          acc / static_cast<double>(traces.size()));
            mt << line;
        }
    }
    return rows;
}

// Fig-1 style prior gallery: one sample each from the truncated-Gaussian,
// l1 and TV priors plus the output of a randomly initialized generator fed
// with a Gaussian latent code.
inline void cmd_prior_sample(const ExperimentConfig& cfg, int size = 64, double alpha = 1.0,
                             int tv_burn_in_sweeps = 10000) {
    const auto dir = resolve_output_dir(cfg);
    std::filesystem::create_directories(dir);
    const uint64_t seed = cfg.noise.seed;

    Image tg = sample_truncated_gaussian(alpha, size, size, mix_seed(seed, 11));
    Image l1 = sample_l1(alpha, size, size, mix_seed(seed, 12));
    Image tvs = sample_tv_prior(alpha, size, size, mix_seed(seed, 13), tv_burn_in_sweeps);

    auto gen_cfg = nn::GeneratorConfig::dcgan(size);
    auto codes = nn::sample_latent_codes(gen_cfg, 1, mix_seed(seed, 14));
    auto params = nn::init_generator_params(gen_cfg, 1, mix_seed(seed, 15));
    Image dip = nn::mcdip_forward(codes, params, gen_cfg);

    auto auto_range_png = [&](const std::string& name, const Image& img) {
        const auto [mn, mx] = std::minmax_element(img.values.begin(), img.values.end());
        write_png_gray((dir / name).string(), img, *mn, *mx > *mn ? *mx : *mn + 1.0);
    };
    auto_range_png("prior_truncated_gaussian.png", tg);
    auto_range_png("prior_l1.png", l1);
    auto_range_png("prior_tv.png", tvs);
    auto_range_png("prior_dip.png", dip);

    auto norm01 = [](Image img) {
        const auto [mn, mx] = std::minmax_element(img.values.begin(), img.values.end());
        const double span = *mx > *mn ? *mx - *mn : 1.0;
        for (auto& v : img.values) v = (v - *mn) / span;
        return img;
    };
    write_png_gray((dir / "prior_panels.png").string(),
                   montage_row({norm01(tg), norm01(l1), norm01(tvs), norm01(dip)}), 0.0, 1.0);
}

} // namespace ctkit
