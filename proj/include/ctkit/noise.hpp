#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "ctkit/image.hpp"
#include "ctkit/rng.hpp"

namespace ctkit {

enum class NoiseKind { gaussian, poisson };

struct NoiseSpec {
    NoiseKind kind = NoiseKind::gaussian;
    double sigma = 0.03;     // gaussian only, sinogram units
    uint64_t seed = 0;

    void validate() const {
        if (kind == NoiseKind::gaussian && !(sigma > 0.0))
            throw std::invalid_argument("NoiseSpec: sigma must be > 0 for gaussian noise");
    }
};

// y = f + eps with eps i.i.d. N(0, sigma^2). Each bin draws from its own
// derived stream, so the result does not depend on evaluation order.
inline Sinogram add_gaussian_noise(const Sinogram& f, double sigma, uint64_t seed) {
    if (sigma < 0.0) throw std::invalid_argument("add_gaussian_noise: sigma must be >= 0");
    Sinogram y = f;
    if (sigma == 0.0) return y;
    for (size_t i = 0; i < y.values.size(); ++i) {
        Rng rng(mix_seed(seed, i));
        y.values[i] += sigma * rng.normal();
    }
    return y;
}

// y_i ~ Poisson(f_i), independently per bin, integer-valued.
inline Sinogram sample_poisson(const Sinogram& f, uint64_t seed) {
    Sinogram y = f;
    for (size_t i = 0; i < y.values.size(); ++i) {
        if (!(f.values[i] >= 0.0))
            throw std::invalid_argument(
                "sample_poisson: negative or non-finite rate at bin " + std::to_string(i) +
                " (is the forward projection normalized?)");
        Rng rng(mix_seed(seed, i));
        y.values[i] = static_cast<double>(rng.poisson(f.values[i]));
    }
    return y;
}

// 10 log10(||f||^2 / ||y - f||^2); the toolkit reports the realized SNR of a
// simulation rather than assuming a nominal value.
inline double realized_snr_db(const Sinogram& clean, const Sinogram& noisy) {
    if (!clean.same_shape(noisy))
        throw std::invalid_argument("realized_snr_db: shape mismatch");
    double sig = 0.0, err = 0.0;
    for (size_t i = 0; i < clean.values.size(); ++i) {
        sig += clean.values[i] * clean.values[i];
        const double d = noisy.values[i] - clean.values[i];
        err += d * d;
    }
    if (err == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(sig / err);
}

} // namespace ctkit
