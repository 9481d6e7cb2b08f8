#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ctkit/image.hpp"

namespace ctkit {

enum class FidelityKind { l2, poisson };

// Positivity floor applied to projected intensities before the Poisson log.
inline constexpr double kPoissonFloor = 1e-8;

// F(Ax, y) = 1/2 ||Ax - y||^2.
inline double l2_fidelity(const Sinogram& ax, const Sinogram& y) {
    if (!ax.same_shape(y)) throw std::invalid_argument("l2_fidelity: shape mismatch");
    double s = 0.0;
    for (size_t i = 0; i < ax.values.size(); ++i) {
        const double d = ax.values[i] - y.values[i];
        s += 0.5 * d * d;
    }
    return s;
}

// Gradient w.r.t. Ax: Ax - y.
inline std::vector<double> l2_fidelity_grad(const Sinogram& ax, const Sinogram& y) {
    if (!ax.same_shape(y)) throw std::invalid_argument("l2_fidelity: shape mismatch");
    std::vector<double> g(ax.values.size());
    for (size_t i = 0; i < g.size(); ++i) g[i] = ax.values[i] - y.values[i];
    return g;
}

// Poisson regression loss F(Ax, y) = <1, Ax> - <y, log Ax>, with Ax floored
// at kPoissonFloor before the log.
inline double poisson_fidelity(const Sinogram& ax, const Sinogram& y) {
    if (!ax.same_shape(y)) throw std::invalid_argument("poisson_fidelity: shape mismatch");
    double s = 0.0;
    for (size_t i = 0; i < ax.values.size(); ++i) {
        const double v = std::max(ax.values[i], kPoissonFloor);
        if (!std::isfinite(v))
            throw std::invalid_argument("poisson_fidelity: non-finite projected intensity");
        s += v - y.values[i] * std::log(v);
    }
    return s;
}

// Gradient w.r.t. Ax: 1 - y/Ax on the unclamped region; zero below the floor
// (the clamp blocks the derivative there).
inline std::vector<double> poisson_fidelity_grad(const Sinogram& ax, const Sinogram& y) {
    if (!ax.same_shape(y)) throw std::invalid_argument("poisson_fidelity: shape mismatch");
    std::vector<double> g(ax.values.size());
    for (size_t i = 0; i < g.size(); ++i) {
        const double v = ax.values[i];
        if (!std::isfinite(v))
            throw std::invalid_argument("poisson_fidelity: non-finite projected intensity");
        g[i] = v > kPoissonFloor ? 1.0 - y.values[i] / v : 0.0;
    }
    return g;
}

} // namespace ctkit
