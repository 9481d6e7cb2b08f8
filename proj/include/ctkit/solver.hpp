#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "ctkit/errors.hpp"
#include "ctkit/fidelity.hpp"
#include "ctkit/image.hpp"
#include "ctkit/metrics.hpp"
#include "ctkit/nn/adam.hpp"
#include "ctkit/nn/generator.hpp"
#include "ctkit/nn/graph.hpp"
#include "ctkit/projector.hpp"
#include "ctkit/trace.hpp"
#include "ctkit/tv.hpp"

namespace ctkit {

struct SolverConfig {
    double rho = 1.0;
    double lambda = 4.0;           // TV weight in R(x) = lambda * TV(x)
    int num_codes = 20;            // N
    int iterations = 5000;         // T
    double base_lr = 0.02;
    int lr_halving_period = 1000;
    FidelityKind fidelity = FidelityKind::l2;
    uint64_t seed = 0;
    int trace_every = 25;
    double counts_scale = 1.0;     // photon scaling folded into the operator
    bool train_alphas = true;      // frozen at ones when false
    double tv_edge_length = 1.0;
    nn::GeneratorConfig generator;
    ProxTvOptions prox;

    void validate() const {
        if (!(rho > 0.0)) throw std::invalid_argument("SolverConfig: rho must be > 0");
        if (lambda < 0.0) throw std::invalid_argument("SolverConfig: lambda must be >= 0");
        if (num_codes < 1) throw std::invalid_argument("SolverConfig: num_codes must be >= 1");
        if (iterations < 1) throw std::invalid_argument("SolverConfig: iterations must be >= 1");
        if (trace_every < 1) throw std::invalid_argument("SolverConfig: trace_every must be >= 1");
        if (!(counts_scale > 0.0))
            throw std::invalid_argument("SolverConfig: counts_scale must be > 0");
        generator.validate();
    }
};

// Snapshot handed to per-iteration observers; t counts completed iterations.
struct AdmmState {
    int t;
    const Image& x;
    const Image& u;
    const Image& gen_output;
    const nn::GeneratorParams& params;
};

using SolverObserver = std::function<void(const AdmmState&)>;

struct RunResult {
    Image final_image;
    Image best_image;   // at the best recorded PSNR; equals final without truth
    RunTrace trace;
};

namespace detail {

inline double fidelity_value(FidelityKind kind, const Sinogram& ax, const Sinogram& y) {
    return kind == FidelityKind::l2 ? l2_fidelity(ax, y) : poisson_fidelity(ax, y);
}

inline std::vector<double> fidelity_gradient(FidelityKind kind, const Sinogram& ax,
                                             const Sinogram& y) {
    return kind == FidelityKind::l2 ? l2_fidelity_grad(ax, y) : poisson_fidelity_grad(ax, y);
}

inline Sinogram scaled_forward(const ProjectionMatrix& A, const Image& img, double scale) {
    Sinogram s = A.forward(img);
    if (scale != 1.0)
        for (auto& v : s.values) v *= scale;
    return s;
}

} // namespace detail

// Fidelity loss of a candidate reconstruction under the solver's measurement
// scaling: F(scale * A x, y).
inline double reconstruction_fidelity(const Image& x, const Sinogram& y,
                                      const ProjectionMatrix& A, const SolverConfig& cfg) {
    return detail::fidelity_value(cfg.fidelity, detail::scaled_forward(A, x, cfg.counts_scale), y);
}

// L_rho evaluated at a precomputed generator output:
//   F(scale*A*G, y) + lambda*TV(x) + rho/2 ||x - G + u||^2 - rho/2 ||u||^2.
inline double augmented_lagrangian_at(const Image& x, const Image& gen_out, const Image& u,
                                      const Sinogram& y, const ProjectionMatrix& A,
                                      const SolverConfig& cfg) {
    double val = detail::fidelity_value(
        cfg.fidelity, detail::scaled_forward(A, gen_out, cfg.counts_scale), y);
    if (cfg.lambda > 0.0) val += cfg.lambda * tv(x, {cfg.tv_edge_length, 1.0});
    double coupling = 0.0, dual = 0.0;
    for (size_t i = 0; i < x.values.size(); ++i) {
        const double d = x.values[i] - gen_out.values[i] + u.values[i];
        coupling += d * d;
        dual += u.values[i] * u.values[i];
    }
    return val + 0.5 * cfg.rho * (coupling - dual);
}

// L_rho with the generator evaluated from its parameters.
inline double augmented_lagrangian(const Image& x, const nn::LatentCodes& codes,
                                   nn::GeneratorParams& params, const Image& u,
                                   const Sinogram& y, const ProjectionMatrix& A,
                                   const SolverConfig& cfg, bool use_alphas = true) {
    nn::Graph g;
    auto hs = nn::build_generator(g, codes, params, cfg.generator, use_alphas);
    return augmented_lagrangian_at(x, nn::node_to_image(hs.output, x.physical_extent), u, y,
                                   A, cfg);
}

namespace detail {

struct TraceBuilder {
    const Image* truth;
    SsimSpec ssim_spec;
    RunTrace trace;
    Image best_image;
    double best_psnr = -std::numeric_limits<double>::infinity();

    void record(int t, const Image& recon, double fid, double lag) {
        TraceRecord r;
        r.t = t;
        r.fidelity = fid;
        r.lagrangian = lag;
        if (truth) {
            r.psnr = psnr(recon, *truth);
            r.ssim = ssim(recon, *truth, ssim_spec);
            if (r.psnr > best_psnr) {
                best_psnr = r.psnr;
                best_image = recon;
                trace.best_index = static_cast<int>(trace.records.size());
            }
        } else {
            r.psnr = std::numeric_limits<double>::quiet_NaN();
            r.ssim = std::numeric_limits<double>::quiet_NaN();
        }
        trace.records.push_back(r);
    }
};

inline void check_operator(const Sinogram& y, const ProjectionMatrix& A,
                           const SolverConfig& cfg) {
    cfg.validate();
    if (y.num_angles != A.num_angles() || y.num_detectors != A.num_detectors())
        throw std::invalid_argument("solver: measurement dims mismatch operator");
    if (cfg.generator.output_width() != A.grid().width ||
        cfg.generator.output_height() != A.grid().height ||
        cfg.generator.output_channels() != 1)
        throw std::invalid_argument("solver: generator output does not match image grid");
}

// dLoss/dG for the data term: scale * A^T grad_F(scale * A G, y); also
// returns the fidelity value through `fid`.
inline std::vector<double> data_term_grad(const Image& gen_out, const Sinogram& y,
                                          const ProjectionMatrix& A, const SolverConfig& cfg,
                                          double& fid) {
    Sinogram ax = scaled_forward(A, gen_out, cfg.counts_scale);
    fid = fidelity_value(cfg.fidelity, ax, y);
    std::vector<double> gsino = fidelity_gradient(cfg.fidelity, ax, y);
    std::vector<double> gimg;
    A.adjoint_into(gsino, gimg);
    if (cfg.counts_scale != 1.0)
        for (auto& v : gimg) v *= cfg.counts_scale;
    return gimg;
}

// Shared PnP-DIP / MCDIP-ADMM loop (Algorithm: proximal x-step, one
// optimizer step on L_rho for theta, dual ascent). The two entry points
// differ only in whether features pass through the channel-importance
// composition.
inline RunResult run_admm(const Sinogram& y, const ProjectionMatrix& A,
                          const SolverConfig& cfg, const Image* truth,
                          const SolverObserver& observer, bool use_alphas) {
    check_operator(y, A, cfg);
    const double extent = A.grid().extent;
    const auto codes =
        nn::sample_latent_codes(cfg.generator, use_alphas ? cfg.num_codes : 1,
                                mix_seed(cfg.seed, 1));
    auto params = nn::init_generator_params(cfg.generator, codes.count(),
                                            mix_seed(cfg.seed, 2));
    nn::Adam opt(params.trainable(use_alphas && cfg.train_alphas));

    auto graph = std::make_unique<nn::Graph>();
    auto hs = nn::build_generator(*graph, codes, params, cfg.generator, use_alphas);
    Image gen_out = nn::node_to_image(hs.output, extent);

    Image x = gen_out;                                   // x0 = G(theta0)
    Image u(x.width, x.height, extent, 0.0);             // u0 = 0
    const double prox_weight = cfg.lambda * cfg.tv_edge_length / cfg.rho;

    TraceBuilder tb{truth, SsimSpec{}, {}, {}, -std::numeric_limits<double>::infinity()};
    for (int t = 0; t < cfg.iterations; ++t) {
        // x-step
        Image v(x.width, x.height, extent);
        for (size_t i = 0; i < v.values.size(); ++i)
            v.values[i] = gen_out.values[i] - u.values[i];
        x = prox_weight > 0.0 ? prox_tv(v, prox_weight, cfg.prox) : v;

        // theta-step: one optimizer step on L_rho(x_{t+1}, theta, u_t)
        double fid = 0.0;
        std::vector<double> gout = data_term_grad(gen_out, y, A, cfg, fid);
        if (!std::isfinite(fid))
            throw NumericError("solver: non-finite fidelity loss at iteration " +
                               std::to_string(t));
        for (size_t i = 0; i < gout.size(); ++i)
            gout[i] += cfg.rho * (gen_out.values[i] - x.values[i] - u.values[i]);
        params.zero_grad();
        graph->backward(hs.output, gout);
        opt.step(nn::scheduled_lr(cfg.base_lr, t, cfg.lr_halving_period));

        // refresh G(theta_{t+1}); reused by the dual ascent, the trace and
        // the next x-step
        graph = std::make_unique<nn::Graph>();
        hs = nn::build_generator(*graph, codes, params, cfg.generator, use_alphas);
        gen_out = nn::node_to_image(hs.output, extent);

        // dual ascent
        for (size_t i = 0; i < u.values.size(); ++i)
            u.values[i] += x.values[i] - gen_out.values[i];

        if (observer) observer(AdmmState{t + 1, x, u, gen_out, params});
        if ((t + 1) % cfg.trace_every == 0 || t + 1 == cfg.iterations) {
            const double lag = augmented_lagrangian_at(x, gen_out, u, y, A, cfg);
            if (!std::isfinite(lag))
                throw NumericError("solver: non-finite augmented Lagrangian at iteration " +
                                   std::to_string(t));
            tb.record(t + 1, x, reconstruction_fidelity(x, y, A, cfg), lag);
        }
    }

    RunResult res;
    res.final_image = x;
    res.best_image = truth ? tb.best_image : x;
    res.trace = std::move(tb.trace);
    return res;
}

} // namespace detail

// Plain deep-image-prior training: T optimizer steps on F(scale*A*G(z;theta), y).
// The recorded "lagrangian" column equals the fidelity (no coupling terms).
inline RunResult run_dip(const Sinogram& y, const ProjectionMatrix& A,
                         const SolverConfig& cfg, const Image* truth = nullptr,
                         const SolverObserver& observer = {}) {
    detail::check_operator(y, A, cfg);
    const double extent = A.grid().extent;
    const auto codes = nn::sample_latent_codes(cfg.generator, 1, mix_seed(cfg.seed, 1));
    auto params = nn::init_generator_params(cfg.generator, 1, mix_seed(cfg.seed, 2));
    nn::Adam opt(params.trainable(false));

    auto graph = std::make_unique<nn::Graph>();
    auto hs = nn::build_generator(*graph, codes, params, cfg.generator, false);
    Image gen_out = nn::node_to_image(hs.output, extent);
    Image u_zero(gen_out.width, gen_out.height, extent, 0.0);

    detail::TraceBuilder tb{truth, SsimSpec{}, {}, {},
                            -std::numeric_limits<double>::infinity()};
    for (int t = 0; t < cfg.iterations; ++t) {
        double fid = 0.0;
        std::vector<double> gout = detail::data_term_grad(gen_out, y, A, cfg, fid);
        if (!std::isfinite(fid))
            throw NumericError("run_dip: non-finite fidelity loss at iteration " +
                               std::to_string(t));
        params.zero_grad();
        graph->backward(hs.output, gout);
        opt.step(nn::scheduled_lr(cfg.base_lr, t, cfg.lr_halving_period));

        graph = std::make_unique<nn::Graph>();
        hs = nn::build_generator(*graph, codes, params, cfg.generator, false);
        gen_out = nn::node_to_image(hs.output, extent);

        if (observer) observer(AdmmState{t + 1, gen_out, u_zero, gen_out, params});
        if ((t + 1) % cfg.trace_every == 0 || t + 1 == cfg.iterations) {
            const double fid_now = reconstruction_fidelity(gen_out, y, A, cfg);
            if (!std::isfinite(fid_now))
                throw NumericError("run_dip: non-finite fidelity at iteration " +
                                   std::to_string(t));
            tb.record(t + 1, gen_out, fid_now, fid_now);
        }
    }

    RunResult res;
    res.final_image = gen_out;
    res.best_image = truth ? tb.best_image : gen_out;
    res.trace = std::move(tb.trace);
    return res;
}

// PnP-DIP: the ADMM loop with a single latent code and no channel-importance
// composition.
inline RunResult run_pnp_dip(const Sinogram& y, const ProjectionMatrix& A,
                             const SolverConfig& cfg, const Image* truth = nullptr,
                             const SolverObserver& observer = {}) {
    return detail::run_admm(y, A, cfg, truth, observer, false);
}

// MCDIP-ADMM: N latent codes composed at the split layer with trainable
// channel importance, inside the same ADMM loop.
inline RunResult run_mcdip_admm(const Sinogram& y, const ProjectionMatrix& A,
                                const SolverConfig& cfg, const Image* truth = nullptr,
                                const SolverObserver& observer = {}) {
    return detail::run_admm(y, A, cfg, truth, observer, true);
}

} // namespace ctkit
