#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace ctkit {

// 2-D scalar field on a pixel grid. Pixels are stored row-major; pixel
// (ix, iy) covers a rectangle of the support square, which is centered at
// the origin with side length physical_extent. iy grows upward.
struct Image {
    int width = 0;
    int height = 0;
    double physical_extent = 1.0;
    std::vector<double> values;

    Image() = default;
    Image(int w, int h, double extent = 1.0, double fill = 0.0)
        : width(w), height(h), physical_extent(extent),
          values(static_cast<size_t>(w) * h, fill) {
        if (w < 1 || h < 1)
            throw std::invalid_argument("Image: width and height must be >= 1");
        if (!(extent > 0.0))
            throw std::invalid_argument("Image: physical_extent must be > 0");
    }

    int size() const { return width * height; }
    double pixel_width() const { return physical_extent / width; }
    double pixel_height() const { return physical_extent / height; }

    double& at(int ix, int iy) { return values[static_cast<size_t>(iy) * width + ix]; }
    double at(int ix, int iy) const { return values[static_cast<size_t>(iy) * width + ix]; }

    bool all_finite() const {
        for (double v : values)
            if (!std::isfinite(v)) return false;
        return true;
    }

    bool same_shape(const Image& o) const {
        return width == o.width && height == o.height;
    }
};

// Angle-by-detector array of line-integral measurements. Row i holds the
// projection at angle index i.
struct Sinogram {
    int num_angles = 0;
    int num_detectors = 0;
    std::vector<double> values;

    Sinogram() = default;
    Sinogram(int angles, int detectors, double fill = 0.0)
        : num_angles(angles), num_detectors(detectors),
          values(static_cast<size_t>(angles) * detectors, fill) {
        if (angles < 1 || detectors < 1)
            throw std::invalid_argument("Sinogram: dimensions must be >= 1");
    }

    int size() const { return num_angles * num_detectors; }

    double& at(int angle, int det) {
        return values[static_cast<size_t>(angle) * num_detectors + det];
    }
    double at(int angle, int det) const {
        return values[static_cast<size_t>(angle) * num_detectors + det];
    }

    bool all_finite() const {
        for (double v : values)
            if (!std::isfinite(v)) return false;
        return true;
    }

    bool same_shape(const Sinogram& o) const {
        return num_angles == o.num_angles && num_detectors == o.num_detectors;
    }
};

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

} // namespace ctkit
