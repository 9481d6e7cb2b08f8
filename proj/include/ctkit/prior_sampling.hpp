#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "ctkit/image.hpp"
#include "ctkit/rng.hpp"
#include "ctkit/tv.hpp"

namespace ctkit {

// Positive-constrained Gaussian white noise prior: i.i.d. half-normal pixels
// with scale alpha.
inline Image sample_truncated_gaussian(double alpha, int width, int height, uint64_t seed) {
    if (!(alpha > 0.0)) throw std::invalid_argument("sample_truncated_gaussian: alpha > 0");
    Image img(width, height);
    Rng rng(seed);
    for (auto& v : img.values) v = std::fabs(alpha * rng.normal());
    return img;
}

// Positive l1 prior factorizes into i.i.d. Exponential(alpha) pixels.
inline Image sample_l1(double alpha, int width, int height, uint64_t seed) {
    if (!(alpha > 0.0)) throw std::invalid_argument("sample_l1: alpha > 0");
    Image img(width, height);
    Rng rng(seed);
    for (auto& v : img.values) v = -std::log(1.0 - rng.uniform()) / alpha;
    return img;
}

struct TvSample {
    Image image;
    double acceptance_rate = 0.0;
};

// One draw from pi_TV(x) ~ exp(-alpha TV(x)) restricted to [0,1]^n, via
// single-site random-walk Metropolis sweeps. Proposals falling outside the
// box are rejected (the target is zero there). Intended for qualitative
// prior visualization, not inference.
inline TvSample sample_tv_prior_detailed(double alpha, int width, int height,
                                         uint64_t seed, int mcmc_sweeps,
                                         double proposal_step = 0.25) {
    if (!(alpha > 0.0)) throw std::invalid_argument("sample_tv_prior: alpha > 0");
    if (mcmc_sweeps < 1) throw std::invalid_argument("sample_tv_prior: mcmc_steps >= 1");

    Image img(width, height);
    Rng rng(seed);
    for (auto& v : img.values) v = rng.uniform();

    long accepted = 0, proposed = 0;
    for (int sweep = 0; sweep < mcmc_sweeps; ++sweep) {
        for (int y = 0; y < height; ++y)
            for (int x = 0; x < width; ++x) {
                const double old_v = img.at(x, y);
                const double new_v = old_v + proposal_step * (2.0 * rng.uniform() - 1.0);
                ++proposed;
                if (new_v < 0.0 || new_v > 1.0) continue;
                double delta = 0.0;   // TV change from this single site
                if (x > 0) delta += std::fabs(new_v - img.at(x - 1, y)) - std::fabs(old_v - img.at(x - 1, y));
                if (x + 1 < width) delta += std::fabs(new_v - img.at(x + 1, y)) - std::fabs(old_v - img.at(x + 1, y));
                if (y > 0) delta += std::fabs(new_v - img.at(x, y - 1)) - std::fabs(old_v - img.at(x, y - 1));
                if (y + 1 < height) delta += std::fabs(new_v - img.at(x, y + 1)) - std::fabs(old_v - img.at(x, y + 1));
                if (delta <= 0.0 || rng.uniform() < std::exp(-alpha * delta)) {
                    img.at(x, y) = new_v;
                    ++accepted;
                }
            }
    }
    return {std::move(img), static_cast<double>(accepted) / static_cast<double>(proposed)};
}

inline Image sample_tv_prior(double alpha, int width, int height, uint64_t seed,
                             int mcmc_sweeps) {
    return sample_tv_prior_detailed(alpha, width, height, seed, mcmc_sweeps).image;
}

} // namespace ctkit
