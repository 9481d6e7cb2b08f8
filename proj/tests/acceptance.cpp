// Acceptance suite: one pass/fail line per criterion. Run with no arguments
// for the full suite, or pass criterion numbers to run a subset, e.g.
//   ./acceptance 1 2 3 4 5 9 10
// Criteria 6-8 train DIP-family solvers at full desk scale and dominate the
// runtime (roughly an hour on one desktop core).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ctkit/fbp.hpp"
#include "ctkit/harness.hpp"
#include "ctkit/metrics.hpp"
#include "ctkit/noise.hpp"
#include "ctkit/phantom.hpp"
#include "ctkit/projector.hpp"
#include "ctkit/solver.hpp"
#include "ctkit/tv.hpp"
#include "oracles.hpp"

using namespace ctkit;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int idx, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s%s%s\n", pass ? "PASS" : "FAIL", idx, name.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Image random_image(int w, int h, uint64_t seed) {
    Image img(w, h);
    Rng rng(seed);
    for (auto& v : img.values) v = rng.uniform();
    return img;
}

// ---- criterion 1: adjoint correctness, both geometries, 32x32 ----
void criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    const GridSpec grid{32, 32, 1.0};
    auto par = ProjectionMatrix::parallel(grid, ParallelGeometry::default_for(32, 1.0, 48));
    auto fan = ProjectionMatrix::fan(grid, FanGeometry::default_for(32, 1.0, 48));
    double worst = 0.0;
    for (const auto* A : {&par, &fan}) {
        for (uint64_t s = 0; s < 20; ++s) {
            auto x = random_image(32, 32, 1000 + s);
            Sinogram y(A->num_angles(), A->num_detectors());
            Rng rng(2000 + s);
            for (auto& v : y.values) v = rng.normal();
            auto ax = A->forward(x);
            auto aty = A->adjoint(y);
            const double gap = std::fabs(dot(ax.values, y.values) - dot(x.values, aty.values));
            const double scale = norm2(ax.values) * norm2(y.values);
            worst = std::max(worst, gap / scale);
        }
    }
    const double dt = seconds_since(t0);
    char buf[160];
    std::snprintf(buf, sizeof(buf), "max relative adjoint gap %.2e (tol 1e-10), %.1f s", worst,
                  dt);
    report(1, "adjoint correctness (parallel + fan)", worst <= 1e-10 && dt < 10.0, buf);
}

// ---- criterion 2: forward-operator accuracy ----
void criterion_2() {
    bool pass = true;
    std::string detail;
    {
        // unit disk vs analytic chords; tolerance from a 2-pixel-width
        // offset uncertainty plus a rasterization allowance
        const int n = 64;
        const double r = 0.3;
        Image disk(n, n);
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix) {
                int inside = 0;
                for (int sy = 0; sy < 4; ++sy)
                    for (int sx = 0; sx < 4; ++sx) {
                        const double x = -0.5 + (ix + (sx + 0.5) / 4.0) / n;
                        const double y = -0.5 + (iy + (sy + 0.5) / 4.0) / n;
                        if (x * x + y * y <= r * r) ++inside;
                    }
                disk.at(ix, iy) = inside / 16.0;
            }
        auto geom = ParallelGeometry::default_for(n, 1.0, 16);
        auto sino = radon_parallel(disk, geom);
        const double px = 1.0 / n;
        auto chord = [&](double s) {
            const double q = r * r - s * s;
            return q > 0.0 ? 2.0 * std::sqrt(q) : 0.0;
        };
        double worst = -1e300;
        for (int a = 0; a < geom.num_angles(); ++a)
            for (int j = 0; j < geom.num_detectors; ++j) {
                const double s = geom.detector_offset(j);
                double lo = chord(s), hi = lo;
                for (double ds = -2.0 * px; ds <= 2.0 * px; ds += 0.5 * px) {
                    lo = std::min(lo, chord(s + ds));
                    hi = std::max(hi, chord(s + ds));
                }
                const double tol = (hi - lo) + 2.0 * px;
                const double err = std::fabs(sino.at(a, j) - chord(s));
                if (err > tol) pass = false;
                worst = std::max(worst, err - tol);
            }
        char buf[80];
        std::snprintf(buf, sizeof(buf), "disk-vs-chord margin %.2e", worst);
        detail += buf;
    }
    {
        double worst_rel = 0.0;
        for (uint64_t seed = 0; seed < 3; ++seed) {
            auto img = random_image(8, 8, 3000 + seed);
            auto geom = ParallelGeometry::default_for(8, 1.0, 7);
            auto sino = radon_parallel(img, geom);
            const double step = img.pixel_width() / 1000.0;
            double num = 0.0, den = 0.0;
            for (int a = 0; a < geom.num_angles(); ++a) {
                const double c = std::cos(geom.angles[a]), s = std::sin(geom.angles[a]);
                for (int j = 0; j < geom.num_detectors; ++j) {
                    const double off = geom.detector_offset(j);
                    const double oracle = testing::sampled_line_integral(
                        img, off * c, off * s, -s, c, step);
                    num += (sino.at(a, j) - oracle) * (sino.at(a, j) - oracle);
                    den += oracle * oracle;
                }
            }
            worst_rel = std::max(worst_rel, std::sqrt(num / den));
        }
        if (worst_rel > 1e-3) pass = false;
        char buf[80];
        std::snprintf(buf, sizeof(buf), "; 8x8 oracle rel err %.2e (tol 1e-3)", worst_rel);
        detail += buf;
    }
    report(2, "forward-operator accuracy", pass, detail);
}

// ---- criterion 3: autodiff soundness ----
void criterion_3() {
    const auto t0 = std::chrono::steady_clock::now();
    using namespace ctkit::nn;
    long checked = 0, failed = 0;

    auto fd_tensor = [&](Tensor& t, auto eval, const std::vector<double>& analytic) {
        for (size_t i = 0; i < t.size(); ++i) {
            const double h = 1e-6 * std::max(1.0, std::fabs(t.v[i]));
            const double orig = t.v[i];
            t.v[i] = orig + h;
            const double up = eval();
            t.v[i] = orig - h;
            const double dn = eval();
            t.v[i] = orig;
            ++checked;
            if (!testing::grad_close(analytic[i], (up - dn) / (2.0 * h))) ++failed;
        }
    };

    // every primitive through a weighted-sum loss
    {
        Rng rng(1);
        auto rnd = [&](std::vector<int> dims, double scale) {
            Tensor t(dims);
            for (auto& v : t.v) v = scale * rng.normal();
            return t;
        };
        Tensor x = rnd({2, 4, 4}, 1.0);
        Tensor w = rnd({3, 2, 3, 3}, 0.5);
        Tensor b = rnd({3}, 0.1);
        Tensor alpha = rnd({2}, 1.0);
        Tensor c1 = rnd({3, 4, 4}, 1.0);
        Tensor c2 = rnd({2, 4, 4}, 1.0);
        Tensor c3 = rnd({2, 8, 8}, 1.0);

        enum class Prim { conv, lrelu, sig, up, add, scale, cmul, cnorm };
        for (Prim prim : {Prim::conv, Prim::lrelu, Prim::sig, Prim::up, Prim::add,
                          Prim::scale, Prim::cmul, Prim::cnorm}) {
            auto build = [&](Graph& g, Node* in, const Tensor** cc) -> Node* {
                *cc = &c2;
                switch (prim) {
                    case Prim::conv: *cc = &c1; return g.conv2d(in, &w, &b);
                    case Prim::lrelu: return g.leaky_relu(in, 0.2);
                    case Prim::sig: return g.sigmoid(in);
                    case Prim::up: *cc = &c3; return g.upsample_nearest(in, 2);
                    case Prim::add: return g.add(in, g.scale(in, 0.3));
                    case Prim::scale: return g.scale(in, -1.7);
                    case Prim::cmul: return g.channel_mul(in, &alpha);
                    case Prim::cnorm: return g.channel_norm(in);
                }
                return nullptr;
            };
            auto eval = [&]() {
                Graph g;
                Node* in = g.input(x);
                const Tensor* cc = nullptr;
                Node* out = build(g, in, &cc);
                double L = 0.0;
                for (size_t i = 0; i < out->v.size(); ++i) L += cc->v[i] * out->v[i];
                return L;
            };
            Graph g;
            Node* in = g.input(x);
            const Tensor* cc = nullptr;
            Node* out = build(g, in, &cc);
            w.zero_grad();
            b.zero_grad();
            alpha.zero_grad();
            g.backward(out, cc->v);
            fd_tensor(x, eval, in->g);
            if (prim == Prim::conv) {
                fd_tensor(w, eval, w.g);
                fd_tensor(b, eval, b.g);
            }
            if (prim == Prim::cmul) fd_tensor(alpha, eval, alpha.g);
        }
    }

    // full 2-block generator, N in {1, 3}
    {
        GeneratorConfig cfg;
        cfg.latent_channels = 4;
        cfg.latent_h = cfg.latent_w = 4;
        cfg.blocks = {{6, 3, 2, Activation::leaky_relu, true},
                      {1, 3, 2, Activation::sigmoid, false}};
        cfg.split_layer = 1;
        for (int N : {1, 3}) {
            auto codes = sample_latent_codes(cfg, N, 42 + N);
            auto params = init_generator_params(cfg, N, 52 + N);
            Tensor c({1, 16, 16});
            Rng rng(62 + N);
            for (auto& v : c.v) v = rng.normal();
            auto eval = [&]() {
                Graph g;
                auto hs = build_generator(g, codes, params, cfg, true);
                double L = 0.0;
                for (size_t i = 0; i < hs.output->v.size(); ++i) L += c.v[i] * hs.output->v[i];
                return L;
            };
            Graph g;
            auto hs = build_generator(g, codes, params, cfg, true);
            params.zero_grad();
            g.backward(hs.output, c.v);
            for (auto* t : params.trainable(true)) fd_tensor(*t, eval, t->g);
        }
    }
    const double dt = seconds_since(t0);
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%ld/%ld gradients within tol, %.1f s (limit 60)",
                  checked - failed, checked, dt);
    report(3, "autodiff soundness (primitives + 2-block generator)", failed == 0 && dt < 60.0,
           buf);
}

// ---- criterion 4: prox_tv vs brute-force oracle ----
void criterion_4() {
    // the two solvers must agree from both sides: a strongly negative gap
    // would mean the oracle itself failed to minimize
    double worst_gap = -1e300, best_gap = 1e300;
    int count = 0;
    for (uint64_t seed = 0; seed < 50; ++seed) {
        auto v = random_image(3, 3, 4000 + seed);
        const double w = 0.5;
        auto x = prox_tv(v, w, {2000, 1e-10});
        auto xo = testing::prox_tv_oracle(v, w);
        const double gap =
            testing::prox_objective(x, v, w) - testing::prox_objective(xo, v, w);
        worst_gap = std::max(worst_gap, gap);
        best_gap = std::min(best_gap, gap);
        ++count;
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "%d instances, objective gap in [%.2e, %.2e] (tol 1e-5, oracle guard 1e-6)",
                  count, best_gap, worst_gap);
    report(4, "prox_tv oracle equivalence", worst_gap <= 1e-5 && best_gap >= -1e-6, buf);
}

// ---- criterion 5: MCDIP(N=1, frozen alpha) reproduces PnP-DIP ----
void criterion_5() {
    auto truth = shepp_logan(32);
    auto geom = ParallelGeometry::default_for(32, 1.0, 40);
    auto A = ProjectionMatrix::parallel(GridSpec::of(truth), geom);
    auto y = add_gaussian_noise(A.forward(truth), 0.03, 17);
    SolverConfig cfg;
    cfg.generator = nn::GeneratorConfig::dcgan(32);
    cfg.iterations = 50;
    cfg.lambda = 0.01;
    cfg.rho = 0.05;
    cfg.num_codes = 1;
    cfg.train_alphas = false;
    cfg.seed = 3;

    std::vector<std::vector<double>> pnp_states, mc_states;
    auto collect = [](std::vector<std::vector<double>>& dest) {
        return [&dest](const AdmmState& s) {
            std::vector<double> snap;
            snap.insert(snap.end(), s.x.values.begin(), s.x.values.end());
            snap.insert(snap.end(), s.u.values.begin(), s.u.values.end());
            snap.insert(snap.end(), s.gen_output.values.begin(), s.gen_output.values.end());
            dest.push_back(std::move(snap));
        };
    };
    run_pnp_dip(y, A, cfg, &truth, collect(pnp_states));
    run_mcdip_admm(y, A, cfg, &truth, collect(mc_states));
    double worst = 0.0;
    for (size_t k = 0; k < pnp_states.size(); ++k)
        for (size_t i = 0; i < pnp_states[k].size(); ++i)
            worst = std::max(worst, std::fabs(pnp_states[k][i] - mc_states[k][i]));
    char buf[120];
    std::snprintf(buf, sizeof(buf), "max per-iterate deviation %.2e over 50 iterations",
                  worst);
    report(5, "reduction to PnP-DIP at N = 1", worst <= 1e-10, buf);
}

// ---- criteria 6 + 7 share the desk-scale Gaussian instance ----

struct GaussianInstance {
    Image truth;
    ProjectionMatrix A;
    Sinogram y;
    SolverConfig base;
};

GaussianInstance make_gaussian_instance() {
    GaussianInstance inst;
    inst.truth = phantom_preset("ellipses-a", 64);
    auto geom = ParallelGeometry::default_for(64, 1.0, 100);
    inst.A = ProjectionMatrix::parallel(GridSpec::of(inst.truth), geom);
    inst.y = add_gaussian_noise(inst.A.forward(inst.truth), 0.03, 101);
    inst.base.generator = nn::GeneratorConfig::dcgan(64);
    inst.base.iterations = 5000;
    inst.base.trace_every = 25;
    // Desk-scale ADMM balance: the unit-square operator is far weaker than
    // the paper's pixel-unit one, so the instance uses rescaled rho and
    // lambda (the config defaults stay at the published values).
    inst.base.rho = 0.1;
    inst.base.lambda = 0.005;             // prox weight lambda/rho = 0.05
    inst.base.lr_halving_period = 5000;   // constant lr across this run
    return inst;
}

struct MethodStats {
    std::vector<double> final_psnr, best_psnr;
    double seconds = 0.0;
    double mean_final() const {
        double s = 0.0;
        for (double v : final_psnr) s += v;
        return s / static_cast<double>(final_psnr.size());
    }
    double mean_gap() const {
        double s = 0.0;
        for (size_t i = 0; i < final_psnr.size(); ++i) s += best_psnr[i] - final_psnr[i];
        return s / static_cast<double>(final_psnr.size());
    }
};

MethodStats run_batch(const GaussianInstance& inst, const std::string& method,
                      int num_codes) {
    MethodStats stats;
    const auto t0 = std::chrono::steady_clock::now();
    for (uint64_t seed : {1, 2, 3}) {
        SolverConfig cfg = inst.base;
        cfg.seed = seed;
        cfg.num_codes = num_codes;
        RunResult run = method == "dip" ? run_dip(inst.y, inst.A, cfg, &inst.truth)
                                        : run_mcdip_admm(inst.y, inst.A, cfg, &inst.truth);
        stats.final_psnr.push_back(run.trace.final_record().psnr);
        stats.best_psnr.push_back(run.trace.best_record().psnr);
    }
    stats.seconds = seconds_since(t0);
    return stats;
}

std::optional<MethodStats> g_mcdip10;   // shared between criteria 6 and 7

void criterion_6() {
    auto inst = make_gaussian_instance();
    auto dip = run_batch(inst, "dip", 1);
    auto mcdip = run_batch(inst, "mcdip", 10);
    g_mcdip10 = mcdip;
    const double dip_gap = dip.mean_gap();
    const double mc_gap = mcdip.mean_gap();
    const bool runtime_ok = dip.seconds < 1800.0 && mcdip.seconds < 1800.0;
    // module contract: MCDIP final stays within 0.5 dB of its best
    const bool pass = mc_gap < dip_gap && dip_gap > 1.0 && mc_gap <= 0.5 && runtime_ok;
    char buf[240];
    std::snprintf(buf, sizeof(buf),
                  "gap(DIP) %.2f dB (need > 1), gap(MCDIP N=10) %.2f dB (need < DIP, <= 0.5); "
                  "finals %.2f vs %.2f dB; %.0f s / %.0f s (limit 1800 each)",
                  dip_gap, mc_gap, dip.mean_final(), mcdip.mean_final(), dip.seconds,
                  mcdip.seconds);
    report(6, "overfitting mitigation (trend)", pass, buf);
}

void criterion_7() {
    auto inst = make_gaussian_instance();
    auto n1 = run_batch(inst, "mcdip", 1);
    if (!g_mcdip10) g_mcdip10 = run_batch(inst, "mcdip", 10);
    auto n10 = *g_mcdip10;
    auto n20 = run_batch(inst, "mcdip", 20);
    const double p1 = n1.mean_final(), p10 = n10.mean_final(), p20 = n20.mean_final();
    const bool pass = p1 <= p10 && std::fabs(p20 - p10) < (p10 - p1);
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "mean final PSNR: N=1 %.2f, N=10 %.2f, N=20 %.2f dB "
                  "(plateau: |N20-N10| = %.2f < N10-N1 = %.2f)",
                  p1, p10, p20, std::fabs(p20 - p10), p10 - p1);
    report(7, "code-count trend", pass, buf);
}

// ---- criterion 8: fan-beam + Poisson pipeline ----
void criterion_8() {
    bool grad_ok = true;
    {
        Sinogram ax(3, 5), y(3, 5);
        Rng rng(88);
        for (auto& v : ax.values) v = 0.5 + 4.0 * rng.uniform();
        for (auto& v : y.values) v = 0.5 + 4.0 * rng.uniform();
        auto g = poisson_fidelity_grad(ax, y);
        for (size_t i = 0; i < ax.values.size(); ++i) {
            const double h = 1e-6;
            Sinogram up = ax, dn = ax;
            up.values[i] += h;
            dn.values[i] -= h;
            const double fd = (poisson_fidelity(up, y) - poisson_fidelity(dn, y)) / (2.0 * h);
            if (!testing::grad_close(g[i], fd, 1e-6, 1e-10)) grad_ok = false;
        }
    }

    auto truth = phantom_preset("ellipses-a", 64);
    auto geom = FanGeometry::default_for(64, 1.0, 128);
    auto A = ProjectionMatrix::fan(GridSpec::of(truth), geom);
    Sinogram clean = A.forward(truth);
    double mean = 0.0;
    for (double v : clean.values) mean += v;
    mean /= static_cast<double>(clean.values.size());
    const double counts_scale = 1000.0 / mean;
    Sinogram rates = clean;
    for (auto& v : rates.values) v *= counts_scale;
    auto y = sample_poisson(rates, 909);

    // FBP baseline on count data, rescaled back to image units
    Sinogram y_img_units = y;
    for (auto& v : y_img_units.values) v /= counts_scale;
    const double fbp_psnr = psnr(fbp_fan(y_img_units, geom, GridSpec::of(truth)), truth);

    SolverConfig cfg;
    cfg.generator = nn::GeneratorConfig::dcgan(64);
    cfg.fidelity = FidelityKind::poisson;
    cfg.counts_scale = counts_scale;
    cfg.iterations = 2000;
    cfg.trace_every = 25;
    cfg.num_codes = 5;
    cfg.rho = 10.0;
    cfg.lambda = 0.2;   // prox weight 0.02
    cfg.lr_halving_period = 2000;

    bool finite_ok = true;
    std::vector<double> finals;
    for (uint64_t seed : {1, 2, 3}) {
        cfg.seed = seed;
        auto run = run_mcdip_admm(y, A, cfg, &truth);
        finals.push_back(run.trace.final_record().psnr);
        for (const auto& r : run.trace.records)
            if (!std::isfinite(r.fidelity) || !std::isfinite(r.lagrangian)) finite_ok = false;
    }
    double mean_final = 0.0;
    for (double v : finals) mean_final += v;
    mean_final /= static_cast<double>(finals.size());
    const bool pass = grad_ok && finite_ok && mean_final > fbp_psnr;
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "gradient FD %s; trace finite %s; MCDIP mean final %.2f dB vs FBP %.2f dB",
                  grad_ok ? "ok" : "FAILED", finite_ok ? "ok" : "FAILED", mean_final,
                  fbp_psnr);
    report(8, "poisson pipeline soundness (fan beam)", pass, buf);
}

// ---- criterion 9: metric unit values ----
void criterion_9() {
    bool pass = true;
    std::string detail;
    {
        Image x(8, 8), xhat(8, 8);
        for (int yy = 0; yy < 8; ++yy)
            for (int xx = 0; xx < 8; ++xx) x.at(xx, yy) = (xx + yy) % 2 ? 1.0 : 0.0;
        xhat = x;
        for (auto& v : xhat.values) v += 0.1;
        const double p = psnr(xhat, x);
        if (std::fabs(p - 20.0) > 1e-9) pass = false;
        char buf[64];
        std::snprintf(buf, sizeof(buf), "psnr hand case %.12f", p);
        detail += buf;
    }
    {
        auto x = shepp_logan(32);
        if (ssim(x, x) != 1.0) pass = false;
        Image a(3, 3), b(3, 3);
        b.values = {0.0, 0.5, 1.0, 0.25, 0.75, 0.5, 1.0, 0.0, 0.5};
        a.values = {0.1, 0.4, 0.9, 0.35, 0.65, 0.55, 0.8, 0.2, 0.45};
        SsimSpec spec;
        spec.window = 3;
        const double s = ssim(a, b, spec);
        if (std::fabs(s - 0.9206364949498359) > 1e-9) pass = false;
        char buf[80];
        std::snprintf(buf, sizeof(buf), "; ssim(x,x) = %g; ssim 3x3 hand case %.12f",
                      ssim(x, x), s);
        detail += buf;
    }
    report(9, "metric unit values", pass, detail);
}

// ---- criterion 10: end-to-end byte determinism ----
void criterion_10() {
    const fs::path dir = fs::temp_directory_path() / "ctkit_acceptance_det";
    fs::remove_all(dir);
    ExperimentConfig cfg;
    cfg.phantom.kind = "shepp-logan";
    cfg.phantom.size = 32;
    cfg.geometry.num_angles = 40;
    cfg.noise.seed = 5;
    cfg.solver.method = Method::mcdip_admm;
    cfg.solver.rho = 0.05;
    cfg.solver.lambda = 0.001;
    cfg.solver.num_codes = 2;
    cfg.solver.iterations = 40;
    cfg.solver.trace_every = 10;
    cfg.solver.seeds = {1, 2};
    cfg.output_dir = dir.string();

    auto slurp = [](const fs::path& p) {
        std::ifstream f(p, std::ios::binary);
        std::stringstream ss;
        ss << f.rdbuf();
        return ss.str();
    };
    cmd_simulate(cfg);
    cmd_reconstruct(cfg);
    const std::string t1 = slurp(dir / "mcdip-admm_seed1_trace.csv");
    const std::string t2 = slurp(dir / "mcdip-admm_seed2_trace.csv");
    const std::string s1 = slurp(dir / "mcdip-admm_summary.csv");
    cmd_simulate(cfg);
    cmd_reconstruct(cfg);
    const bool pass = !t1.empty() && t1 == slurp(dir / "mcdip-admm_seed1_trace.csv") &&
                      t2 == slurp(dir / "mcdip-admm_seed2_trace.csv") &&
                      s1 == slurp(dir / "mcdip-admm_summary.csv");
    fs::remove_all(dir);
    report(10, "end-to-end determinism (byte-identical CSVs)", pass,
           pass ? "traces and summary identical across reruns" : "byte mismatch");
}

} // namespace

int main(int argc, char** argv) {
    std::set<int> wanted;
    for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));
    auto want = [&](int k) { return wanted.empty() || wanted.count(k) > 0; };

    if (want(1)) criterion_1();
    if (want(2)) criterion_2();
    if (want(3)) criterion_3();
    if (want(4)) criterion_4();
    if (want(5)) criterion_5();
    if (want(6)) criterion_6();
    if (want(7)) criterion_7();
    if (want(8)) criterion_8();
    if (want(9)) criterion_9();
    if (want(10)) criterion_10();

    if (g_failures == 0) {
        std::printf("acceptance: all criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criterion(s) FAILED\n", g_failures);
    return 1;
}
