// Command-line harness: simulate measurements, reconstruct with classical or
// DIP-family methods, sweep latent-code counts, sample priors, and score
// image pairs.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ctkit/harness.hpp"
#include "ctkit/io/grid.hpp"
#include "ctkit/metrics.hpp"

namespace {

void attach_common(CLI::App* cmd, ctkit::ExperimentConfig& cfg, std::string& config_path) {
    cmd->add_option("--config", config_path, "experiment config file (INI)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", cfg.output_dir, "output directory");
    cmd->add_option("--phantom", cfg.phantom.kind,
                    "shepp-logan | ellipses-a | ellipses-b | ellipses-c");
    cmd->add_option("--size", cfg.phantom.size, "phantom size in pixels");
    cmd->add_option("--extent", cfg.phantom.extent, "support square side length");
    cmd->add_option_function<std::string>(
           "--geometry",
           [&cfg](const std::string& s) { cfg.geometry.kind = ctkit::geometry_kind_from(s); },
           "parallel | fan")
        ->check(CLI::IsMember({"parallel", "fan"}));
    cmd->add_option("--angles", cfg.geometry.num_angles, "number of projection angles");
    cmd->add_option("--detectors", cfg.geometry.num_detectors, "detector count (0 = auto)");
    cmd->add_option("--detector-spacing", cfg.geometry.detector_spacing,
                    "parallel detector spacing (0 = pixel size)");
    cmd->add_option("--source-distance", cfg.geometry.source_distance, "fan source distance");
    cmd->add_option("--detector-distance", cfg.geometry.detector_distance,
                    "fan detector distance");
    cmd->add_option("--detector-pixel-spacing", cfg.geometry.detector_pixel_spacing,
                    "fan detector pixel spacing (0 = auto)");
    cmd->add_option_function<std::string>(
           "--noise",
           [&cfg](const std::string& s) { cfg.noise.kind = ctkit::noise_kind_from(s); },
           "gaussian | poisson")
        ->check(CLI::IsMember({"gaussian", "poisson"}));
    cmd->add_option("--sigma", cfg.noise.sigma, "gaussian noise std");
    cmd->add_option("--noise-seed", cfg.noise.seed, "noise RNG seed");
    cmd->add_option("--target-mean-counts", cfg.noise.target_mean_counts,
                    "mean photon count for poisson scaling");
    cmd->add_option_function<std::string>(
           "--fidelity",
           [&cfg](const std::string& s) { cfg.solver.fidelity = ctkit::fidelity_kind_from(s); },
           "l2 | poisson")
        ->check(CLI::IsMember({"l2", "poisson"}));
}

void attach_solver(CLI::App* cmd, ctkit::ExperimentConfig& cfg) {
    cmd->add_option_function<std::string>(
           "--method",
           [&cfg](const std::string& s) { cfg.solver.method = ctkit::method_from(s); },
           "fbp | cgne | dip | pnp-dip | mcdip-admm")
        ->check(CLI::IsMember({"fbp", "cgne", "dip", "pnp-dip", "mcdip-admm"}));
    cmd->add_option("--rho", cfg.solver.rho, "ADMM penalty parameter");
    cmd->add_option("--lambda", cfg.solver.lambda, "TV weight");
    cmd->add_option("--codes", cfg.solver.num_codes, "latent code count N");
    cmd->add_option("--iters", cfg.solver.iterations, "solver iterations T");
    cmd->add_option("--base-lr", cfg.solver.base_lr, "Adam base learning rate");
    cmd->add_option("--lr-halving-period", cfg.solver.lr_halving_period,
                    "halve the learning rate every this many iterations");
    cmd->add_option("--trace-every", cfg.solver.trace_every, "trace cadence");
    cmd->add_option("--seeds", cfg.solver.seeds, "solver seeds (one run each)");
    cmd->add_option("--cgne-iters", cfg.solver.cgne_iterations, "CGNE iterations");
    cmd->add_option("--fbp-filter", cfg.solver.fbp_filter, "ramp | hann")
        ->check(CLI::IsMember({"ramp", "hann"}));
}

// The config file seeds the defaults; flags parsed afterwards override it.
std::string find_config_path(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--config" && i + 1 < argc) return argv[i + 1];
        if (a.rfind("--config=", 0) == 0) return a.substr(9);
    }
    return {};
}

} // namespace

int main(int argc, char** argv) {
    ctkit::ExperimentConfig cfg;
    std::string config_path = find_config_path(argc, argv);
    try {
        if (!config_path.empty()) cfg = ctkit::load_config(config_path);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    }

    CLI::App app{"CT inverse-problems toolkit"};
    app.require_subcommand(1);
    std::string config_opt;   // value already consumed above

    auto* sim = app.add_subcommand("simulate", "generate phantom + sinograms + noise");
    attach_common(sim, cfg, config_opt);

    auto* rec = app.add_subcommand("reconstruct", "run a reconstruction method per seed");
    attach_common(rec, cfg, config_opt);
    attach_solver(rec, cfg);

    auto* sweep = app.add_subcommand("sweep-codes", "PSNR vs latent-code count table");
    attach_common(sweep, cfg, config_opt);
    attach_solver(sweep, cfg);
    std::vector<int> code_counts;
    sweep->add_option("--counts", code_counts, "code counts to sweep (default 1 5 10 20 30)");

    auto* prior = app.add_subcommand("prior-sample", "four-panel prior sample gallery");
    attach_common(prior, cfg, config_opt);
    int prior_size = 64;
    double prior_alpha = 1.0;
    int tv_sweeps = 10000;
    prior->add_option("--panel-size", prior_size, "panel size in pixels");
    prior->add_option("--alpha", prior_alpha, "prior weight");
    prior->add_option("--tv-sweeps", tv_sweeps, "TV sampler burn-in sweeps");

    auto* met = app.add_subcommand("metrics", "PSNR/SSIM between two grid images");
    std::string path_a, path_b;
    met->add_option("reconstruction", path_a, "reconstruction .grid")->required();
    met->add_option("truth", path_b, "ground truth .grid")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (sim->parsed()) {
            auto s = ctkit::cmd_simulate(cfg);
            std::printf("simulate: wrote %s (realized SNR %.2f dB, counts scale %.6g)\n",
                        s.dir.string().c_str(), s.realized_snr_db, s.counts_scale);
        } else if (rec->parsed()) {
            ctkit::cmd_reconstruct(cfg);
        } else if (sweep->parsed()) {
            auto rows = ctkit::cmd_sweep_codes(cfg, code_counts);
            std::printf("%6s %6s %-20s %10s %10s\n", "N", "seed", "label", "final", "best");
            for (const auto& r : rows)
                std::printf("%6d %6llu %-20s %10.2f %10.2f\n", r.num_codes,
                            static_cast<unsigned long long>(r.seed), r.label.c_str(),
                            r.final_psnr, r.best_psnr);
        } else if (prior->parsed()) {
            ctkit::cmd_prior_sample(cfg, prior_size, prior_alpha, tv_sweeps);
        } else if (met->parsed()) {
            const auto xhat = ctkit::read_grid_image(path_a);
            const auto x = ctkit::read_grid_image(path_b);
            std::printf("psnr = %.6f dB\nssim = %.6f\n", ctkit::psnr(xhat, x),
                        ctkit::ssim(xhat, x));
        }
    } catch (const ctkit::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const ctkit::NumericError& e) {
        std::fprintf(stderr, "numeric error: %s\n", e.what());
        return 2;
    } catch (const ctkit::IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
