#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "ctkit/image.hpp"

namespace ctkit {

// Ellipse in normalized coordinates: the support square maps to [-1, 1]^2.
struct Ellipse {
    double cx = 0.0, cy = 0.0;   // center
    double a = 0.0, b = 0.0;     // semi-axes
    double angle = 0.0;          // rotation, radians
    double intensity = 0.0;      // additive value inside
};

// Rasterizes a sum of ellipse indicators at pixel centers, clamped to [0, 1].
inline Image ellipse_phantom(const std::vector<Ellipse>& spec, int size,
                             double extent = 1.0) {
    for (const auto& e : spec)
        if (!(e.a > 0.0) || !(e.b > 0.0))
            throw std::invalid_argument("ellipse_phantom: axes must be > 0");
    Image img(size, size, extent);
    for (int iy = 0; iy < size; ++iy) {
        const double y = -1.0 + (iy + 0.5) * 2.0 / size;
        for (int ix = 0; ix < size; ++ix) {
            const double x = -1.0 + (ix + 0.5) * 2.0 / size;
            double v = 0.0;
            for (const auto& e : spec) {
                const double c = std::cos(e.angle), s = std::sin(e.angle);
                const double dx = x - e.cx, dy = y - e.cy;
                const double u = (c * dx + s * dy) / e.a;
                const double w = (-s * dx + c * dy) / e.b;
                if (u * u + w * w <= 1.0) v += e.intensity;
            }
            img.at(ix, iy) = std::clamp(v, 0.0, 1.0);
        }
    }
    return img;
}

// Modified Shepp-Logan ellipse table (Toft's contrast-enhanced variant),
// values land in [0, 1].
inline const std::vector<Ellipse>& shepp_logan_ellipses() {
    static const std::vector<Ellipse> table = {
        {0.0, 0.0, 0.69, 0.92, 0.0, 1.0},
        {0.0, -0.0184, 0.6624, 0.874, 0.0, -0.8},
        {0.22, 0.0, 0.11, 0.31, -18.0 * std::numbers::pi / 180.0, -0.2},
        {-0.22, 0.0, 0.16, 0.41, 18.0 * std::numbers::pi / 180.0, -0.2},
        {0.0, 0.35, 0.21, 0.25, 0.0, 0.1},
        {0.0, 0.1, 0.046, 0.046, 0.0, 0.1},
        {0.0, -0.1, 0.046, 0.046, 0.0, 0.1},
        {-0.08, -0.605, 0.046, 0.023, 0.0, 0.1},
        {0.0, -0.606, 0.023, 0.023, 0.0, 0.1},
        {0.06, -0.605, 0.023, 0.046, 0.0, 0.1},
    };
    return table;
}

inline Image shepp_logan(int size, double extent = 1.0) {
    if (size < 16) throw std::invalid_argument("shepp_logan: size must be >= 16");
    return ellipse_phantom(shepp_logan_ellipses(), size, extent);
}

// Three synthetic test images standing in for clinical slices in comparison
// tables: a head-like phantom, nested rings, and an off-axis blob cluster.
inline Image phantom_preset(const std::string& name, int size, double extent = 1.0) {
    if (name == "shepp-logan") return shepp_logan(size, extent);
    if (name == "ellipses-a") {
        // Skull-like shell with asymmetric inner features.
        return ellipse_phantom(
            {
                {0.0, 0.0, 0.82, 0.88, 0.0, 0.25},
                {0.0, 0.0, 0.74, 0.80, 0.0, 0.35},
                {-0.25, 0.2, 0.28, 0.18, 0.5, 0.25},
                {0.28, -0.1, 0.14, 0.3, -0.3, -0.25},
                {0.05, -0.45, 0.12, 0.1, 0.0, 0.3},
                {-0.1, -0.2, 0.05, 0.05, 0.0, -0.2},
                {0.35, 0.4, 0.07, 0.07, 0.0, 0.3},
            },
            size, extent);
    }
    if (name == "ellipses-b") {
        // Concentric rings with small insets of alternating contrast.
        return ellipse_phantom(
            {
                {0.0, 0.0, 0.9, 0.9, 0.0, 0.2},
                {0.0, 0.0, 0.7, 0.7, 0.0, 0.2},
                {0.0, 0.0, 0.5, 0.5, 0.0, 0.2},
                {0.0, 0.0, 0.3, 0.3, 0.0, 0.2},
                {0.0, 0.55, 0.08, 0.08, 0.0, -0.35},
                {0.55, 0.0, 0.08, 0.08, 0.0, 0.35},
                {0.0, -0.55, 0.08, 0.08, 0.0, -0.35},
                {-0.55, 0.0, 0.08, 0.08, 0.0, 0.35},
            },
            size, extent);
    }
    if (name == "ellipses-c") {
        // Blob cluster on a soft background disk.
        return ellipse_phantom(
            {
                {0.0, 0.0, 0.85, 0.85, 0.0, 0.3},
                {-0.3, 0.3, 0.22, 0.34, 0.8, 0.4},
                {0.32, 0.28, 0.18, 0.18, 0.0, 0.25},
                {0.3, -0.32, 0.3, 0.14, -0.6, 0.35},
                {-0.33, -0.3, 0.12, 0.2, 0.2, -0.25},
                {0.0, 0.02, 0.08, 0.08, 0.0, 0.45},
                {-0.05, -0.55, 0.05, 0.05, 0.0, 0.3},
            },
            size, extent);
    }
    throw std::invalid_argument("phantom_preset: unknown phantom '" + name + "'");
}

} // namespace ctkit
