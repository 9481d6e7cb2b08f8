#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace ctkit {

// Parallel-beam acquisition: for each angle phi the rays share direction
// (-sin phi, cos phi) and are indexed by the signed distance s from the
// origin. Detector offsets are uniform and symmetric about zero.
struct ParallelGeometry {
    std::vector<double> angles;   // radians, strictly increasing, in [0, pi)
    int num_detectors = 0;
    double detector_spacing = 0.0;

    int num_angles() const { return static_cast<int>(angles.size()); }

    double detector_offset(int j) const {
        return (j - 0.5 * (num_detectors - 1)) * detector_spacing;
    }

    std::vector<double> detector_offsets() const {
        std::vector<double> s(num_detectors);
        for (int j = 0; j < num_detectors; ++j) s[j] = detector_offset(j);
        return s;
    }

    void validate() const {
        if (angles.empty()) throw std::invalid_argument("ParallelGeometry: no angles");
        if (num_detectors < 1) throw std::invalid_argument("ParallelGeometry: no detectors");
        if (!(detector_spacing > 0.0))
            throw std::invalid_argument("ParallelGeometry: detector_spacing must be > 0");
        for (size_t i = 0; i < angles.size(); ++i) {
            if (angles[i] < 0.0 || angles[i] >= std::numbers::pi)
                throw std::invalid_argument("ParallelGeometry: angles must lie in [0, pi)");
            if (i > 0 && !(angles[i] > angles[i - 1]))
                throw std::invalid_argument("ParallelGeometry: angles must be strictly increasing");
        }
    }

    static ParallelGeometry uniform(int num_angles, int num_detectors, double spacing) {
        ParallelGeometry g;
        g.angles.resize(num_angles);
        for (int i = 0; i < num_angles; ++i)
            g.angles[i] = std::numbers::pi * i / num_angles;
        g.num_detectors = num_detectors;
        g.detector_spacing = spacing;
        return g;
    }

    // Detector count = image diagonal in pixels, spacing = pixel size, so the
    // detector span covers the support square at every angle.
    static ParallelGeometry default_for(int image_size, double extent = 1.0,
                                        int num_angles = 100) {
        int nd = static_cast<int>(std::ceil(std::numbers::sqrt2 * image_size));
        return uniform(num_angles, nd, extent / image_size);
    }
};

// Fan-beam acquisition: the source rotates at source_distance from the
// origin; a flat detector of num_detector_pixels sits detector_distance
// beyond the origin on the opposite side, perpendicular to the central axis.
struct FanGeometry {
    std::vector<double> angles;   // radians, strictly increasing, in [0, 2*pi)
    double source_distance = 0.0;
    double detector_distance = 0.0;
    int num_detector_pixels = 0;
    double detector_pixel_spacing = 0.0;

    int num_angles() const { return static_cast<int>(angles.size()); }

    double detector_offset(int j) const {
        return (j - 0.5 * (num_detector_pixels - 1)) * detector_pixel_spacing;
    }

    void validate() const {
        if (angles.empty()) throw std::invalid_argument("FanGeometry: no angles");
        if (!(source_distance > 0.0))
            throw std::invalid_argument("FanGeometry: source_distance must be > 0");
        if (!(detector_distance > 0.0))
            throw std::invalid_argument("FanGeometry: detector_distance must be > 0");
        if (num_detector_pixels < 1)
            throw std::invalid_argument("FanGeometry: no detector pixels");
        if (!(detector_pixel_spacing > 0.0))
            throw std::invalid_argument("FanGeometry: detector_pixel_spacing must be > 0");
        for (size_t i = 0; i < angles.size(); ++i) {
            if (angles[i] < 0.0 || angles[i] >= 2.0 * std::numbers::pi)
                throw std::invalid_argument("FanGeometry: angles must lie in [0, 2*pi)");
            if (i > 0 && !(angles[i] > angles[i - 1]))
                throw std::invalid_argument("FanGeometry: angles must be strictly increasing");
        }
    }

    static FanGeometry uniform(int num_angles, double source_distance,
                               double detector_distance, int num_detector_pixels,
                               double detector_pixel_spacing) {
        FanGeometry g;
        g.angles.resize(num_angles);
        for (int i = 0; i < num_angles; ++i)
            g.angles[i] = 2.0 * std::numbers::pi * i / num_angles;
        g.source_distance = source_distance;
        g.detector_distance = detector_distance;
        g.num_detector_pixels = num_detector_pixels;
        g.detector_pixel_spacing = detector_pixel_spacing;
        return g;
    }

    // Source and detector at one image-extent from the origin, detector width
    // twice the extent: the desk-scale analogue of a 512/512/2.0 setup on a
    // 512-pixel image. Angle count defaults to the pixel count.
    static FanGeometry default_for(int image_size, double extent = 1.0,
                                   int num_angles = 0) {
        if (num_angles <= 0) num_angles = image_size;
        return uniform(num_angles, extent, extent, image_size,
                       2.0 * extent / image_size);
    }
};

} // namespace ctkit
