#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

namespace ctkit {

// Project-wide PRNG: SplitMix64 (Steele, Lea, Flood 2014). The generator,
// the Box-Muller normal transform and the Poisson samplers below are pinned
// here so that every stochastic output of the toolkit is reproducible from
// its seed. Bit-level reproducibility holds for a fixed build; across
// platforms the streams agree up to libm rounding.
class Rng {
  public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform on [0, 1): top 53 bits.
    double uniform() { return (next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller; the sine partner is cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 1.0 - uniform();   // (0, 1]
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    // Poisson draw: Knuth's product method below 30, Hormann's PTRS
    // transformed rejection above.
    long poisson(double lambda) {
        if (lambda < 0.0 || !std::isfinite(lambda))
            throw std::invalid_argument("Rng::poisson: rate must be finite and >= 0");
        if (lambda == 0.0) return 0;
        if (lambda < 30.0) {
            const double limit = std::exp(-lambda);
            long k = 0;
            double p = 1.0;
            do {
                ++k;
                p *= uniform();
            } while (p > limit);
            return k - 1;
        }
        const double slam = std::sqrt(lambda);
        const double loglam = std::log(lambda);
        const double b = 0.931 + 2.53 * slam;
        const double a = -0.059 + 0.02483 * b;
        const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
        const double vr = 0.9277 - 3.6224 / (b - 2.0);
        for (;;) {
            double u = uniform() - 0.5;
            double v = uniform();
            double us = 0.5 - std::fabs(u);
            double kf = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
            if (us >= 0.07 && v <= vr) return static_cast<long>(kf);
            if (kf < 0.0 || (us < 0.013 && v > us)) continue;
            if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
                kf * loglam - lambda - std::lgamma(kf + 1.0))
                return static_cast<long>(kf);
        }
    }

  private:
    uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// Derives an independent stream seed; used for per-bin noise so sampling is
// order-independent, and for separating code/weight/noise streams of a run.
inline uint64_t mix_seed(uint64_t seed, uint64_t stream) {
    Rng r(seed ^ (0x9E3779B97F4A7C15ull * (stream + 1)));
    return r.next_u64();
}

} // namespace ctkit
