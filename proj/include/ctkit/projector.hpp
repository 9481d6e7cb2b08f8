#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <variant>
#include <vector>

#include "ctkit/geometry.hpp"
#include "ctkit/image.hpp"

namespace ctkit {

// Pixel grid a projector maps from: dims plus physical side length of the
// centered support square.
struct GridSpec {
    int width = 0;
    int height = 0;
    double extent = 1.0;

    static GridSpec of(const Image& img) {
        return {img.width, img.height, img.physical_extent};
    }
};

namespace detail {

// Appends (pixel, intersection length) pairs for one ray in Siddon fashion:
// clip the ray against the support square, then walk cell boundaries so each
// pixel receives its exact chord length. `origin` is any point on the ray,
// `dir` must be unit length.
inline void trace_ray(const GridSpec& g, double ox, double oy, double dx, double dy,
                      std::vector<int>& cols, std::vector<double>& weights) {
    const double half = 0.5 * g.extent;
    const double px = g.extent / g.width;
    const double py = g.extent / g.height;
    const double inf = std::numeric_limits<double>::infinity();

    // Slab clipping against [-half, half]^2.
    double tmin = -inf, tmax = inf;
    if (dx != 0.0) {
        double t1 = (-half - ox) / dx, t2 = (half - ox) / dx;
        tmin = std::min(t1, t2);
        tmax = std::max(t1, t2);
    } else if (ox <= -half || ox >= half) {
        return;
    }
    if (dy != 0.0) {
        double t1 = (-half - oy) / dy, t2 = (half - oy) / dy;
        tmin = std::max(tmin, std::min(t1, t2));
        tmax = std::min(tmax, std::max(t1, t2));
    } else if (oy <= -half || oy >= half) {
        return;
    }
    if (!(tmax > tmin)) return;

    // Start cell from a point nudged inside the box.
    double t = tmin;
    const double eps = 1e-12 * g.extent;
    double sx = ox + (t + eps) * dx;
    double sy = oy + (t + eps) * dy;
    int ix = std::clamp(static_cast<int>(std::floor((sx + half) / px)), 0, g.width - 1);
    int iy = std::clamp(static_cast<int>(std::floor((sy + half) / py)), 0, g.height - 1);

    const int step_x = dx > 0.0 ? 1 : -1;
    const int step_y = dy > 0.0 ? 1 : -1;
    const double t_delta_x = dx != 0.0 ? px / std::fabs(dx) : inf;
    const double t_delta_y = dy != 0.0 ? py / std::fabs(dy) : inf;

    // Parameter value at the next x / y gridline crossing.
    double t_next_x = inf, t_next_y = inf;
    if (dx != 0.0) {
        double bx = -half + (ix + (step_x > 0 ? 1 : 0)) * px;
        t_next_x = (bx - ox) / dx;
    }
    if (dy != 0.0) {
        double by = -half + (iy + (step_y > 0 ? 1 : 0)) * py;
        t_next_y = (by - oy) / dy;
    }

    while (t < tmax) {
        double t_exit = std::min({t_next_x, t_next_y, tmax});
        double len = t_exit - t;
        if (len > 0.0) {
            cols.push_back(iy * g.width + ix);
            weights.push_back(len);
        }
        if (t_exit >= tmax) break;
        if (t_next_x <= t_next_y) {
            ix += step_x;
            t = t_next_x;
            t_next_x += t_delta_x;
            if (ix < 0 || ix >= g.width) break;
        } else {
            iy += step_y;
            t = t_next_y;
            t_next_y += t_delta_y;
            if (iy < 0 || iy >= g.height) break;
        }
    }
}

} // namespace detail

// Sparse discrete Radon operator in CSR form, one row per (angle, detector)
// bin. The adjoint is the exact transpose of the stored weights, so the
// dot-product identity holds to rounding error by construction.
class ProjectionMatrix {
  public:
    ProjectionMatrix() = default;

    int rows() const { return num_angles_ * num_detectors_; }
    int cols() const { return grid_.width * grid_.height; }
    int num_angles() const { return num_angles_; }
    int num_detectors() const { return num_detectors_; }
    const GridSpec& grid() const { return grid_; }
    size_t nnz() const { return col_.size(); }

    Sinogram forward(const Image& img) const {
        if (img.width != grid_.width || img.height != grid_.height)
            throw std::invalid_argument("ProjectionMatrix::forward: image dims mismatch");
        Sinogram out(num_angles_, num_detectors_);
        const double* x = img.values.data();
        for (int r = 0; r < rows(); ++r) {
            double acc = 0.0;
            for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
                acc += weight_[k] * x[col_[k]];
            out.values[r] = acc;
        }
        return out;
    }

    Image adjoint(const Sinogram& sino) const {
        if (sino.num_angles != num_angles_ || sino.num_detectors != num_detectors_)
            throw std::invalid_argument("ProjectionMatrix::adjoint: sinogram dims mismatch");
        Image out(grid_.width, grid_.height, grid_.extent);
        double* x = out.values.data();
        for (int r = 0; r < rows(); ++r) {
            double s = sino.values[r];
            if (s == 0.0) continue;
            for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
                x[col_[k]] += weight_[k] * s;
        }
        return out;
    }

    // y <- A x into caller storage (used by hot solver loops).
    void forward_into(const std::vector<double>& x, std::vector<double>& y) const {
        y.resize(rows());
        for (int r = 0; r < rows(); ++r) {
            double acc = 0.0;
            for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
                acc += weight_[k] * x[col_[k]];
            y[r] = acc;
        }
    }

    void adjoint_into(const std::vector<double>& y, std::vector<double>& x) const {
        x.assign(cols(), 0.0);
        for (int r = 0; r < rows(); ++r) {
            double s = y[r];
            if (s == 0.0) continue;
            for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
                x[col_[k]] += weight_[k] * s;
        }
    }

    static ProjectionMatrix parallel(const GridSpec& grid, const ParallelGeometry& geom) {
        geom.validate();
        // A detector span narrower than the image diagonal would silently
        // truncate projections.
        const double span = geom.num_detectors * geom.detector_spacing;
        const double diagonal = std::numbers::sqrt2 * grid.extent;
        if (span < diagonal * (1.0 - 1e-12))
            throw std::invalid_argument(
                "ParallelGeometry: detector span does not cover the image diagonal");

        ProjectionMatrix m;
        m.init(grid, geom.num_angles(), geom.num_detectors);
        for (int a = 0; a < geom.num_angles(); ++a) {
            const double c = std::cos(geom.angles[a]);
            const double s = std::sin(geom.angles[a]);
            for (int j = 0; j < geom.num_detectors; ++j) {
                const double off = geom.detector_offset(j);
                // Ray through off*(c, s) with direction (-s, c).
                detail::trace_ray(grid, off * c, off * s, -s, c, m.col_, m.weight_);
                m.row_ptr_.push_back(static_cast<int>(m.col_.size()));
            }
        }
        return m;
    }

    static ProjectionMatrix fan(const GridSpec& grid, const FanGeometry& geom) {
        geom.validate();
        ProjectionMatrix m;
        m.init(grid, geom.num_angles(), geom.num_detector_pixels);
        for (int a = 0; a < geom.num_angles(); ++a) {
            const double c = std::cos(geom.angles[a]);
            const double s = std::sin(geom.angles[a]);
            // Source on its circle; detector line perpendicular to the
            // central axis, detector_distance beyond the origin.
            const double src_x = geom.source_distance * c;
            const double src_y = geom.source_distance * s;
            for (int j = 0; j < geom.num_detector_pixels; ++j) {
                const double off = geom.detector_offset(j);
                const double det_x = -geom.detector_distance * c - off * s;
                const double det_y = -geom.detector_distance * s + off * c;
                double dx = det_x - src_x, dy = det_y - src_y;
                const double n = std::hypot(dx, dy);
                dx /= n;
                dy /= n;
                detail::trace_ray(grid, src_x, src_y, dx, dy, m.col_, m.weight_);
                m.row_ptr_.push_back(static_cast<int>(m.col_.size()));
            }
        }
        if (m.nnz() == 0)
            throw std::invalid_argument("FanGeometry: no ray intersects the image support");
        return m;
    }

  private:
    void init(const GridSpec& grid, int num_angles, int num_detectors) {
        grid_ = grid;
        num_angles_ = num_angles;
        num_detectors_ = num_detectors;
        row_ptr_.assign(1, 0);
        row_ptr_.reserve(static_cast<size_t>(rows()) + 1);
    }

    GridSpec grid_;
    int num_angles_ = 0;
    int num_detectors_ = 0;
    std::vector<int> row_ptr_;
    std::vector<int> col_;
    std::vector<double> weight_;
};

inline void require_finite(const Image& img, const char* what) {
    if (!img.all_finite()) throw std::invalid_argument(std::string(what) + ": non-finite values");
}

inline Sinogram radon_parallel(const Image& img, const ParallelGeometry& geom) {
    require_finite(img, "radon_parallel");
    return ProjectionMatrix::parallel(GridSpec::of(img), geom).forward(img);
}

inline Sinogram radon_fan(const Image& img, const FanGeometry& geom) {
    require_finite(img, "radon_fan");
    return ProjectionMatrix::fan(GridSpec::of(img), geom).forward(img);
}

inline Image radon_adjoint(const Sinogram& sino, const ParallelGeometry& geom,
                           const GridSpec& grid) {
    return ProjectionMatrix::parallel(grid, geom).adjoint(sino);
}

inline Image radon_adjoint(const Sinogram& sino, const FanGeometry& geom,
                           const GridSpec& grid) {
    return ProjectionMatrix::fan(grid, geom).adjoint(sino);
}

} // namespace ctkit
