#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "ctkit/geometry.hpp"
#include "ctkit/image.hpp"
#include "ctkit/projector.hpp"

namespace ctkit {

enum class FbpFilter { ramp, hann };

namespace detail {

// In-place iterative radix-2 FFT; n must be a power of two. Sizes here stay
// in the hundreds, so a dependency-free transform is plenty.
inline void fft(std::vector<std::complex<double>>& a, bool inverse) {
    const size_t n = a.size();
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        const double ang = 2.0 * std::numbers::pi / len * (inverse ? 1.0 : -1.0);
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (size_t k = 0; k < len / 2; ++k) {
                auto u = a[i + k], v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse)
        for (auto& x : a) x /= static_cast<double>(n);
}

inline size_t next_pow2(size_t n) {
    size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// Frequency response of the band-limited ramp (impulse response per
// Kak-Slaney: h(0)=1/(4d^2), h(odd k)=-1/(pi^2 k^2 d^2), zero otherwise),
// optionally Hann-windowed.
inline std::vector<double> ramp_response(size_t nfft, double spacing, FbpFilter filter) {
    std::vector<std::complex<double>> h(nfft, 0.0);
    const double d2 = spacing * spacing;
    h[0] = 1.0 / (4.0 * d2);
    for (size_t k = 1; k <= nfft / 2; ++k) {
        if (k % 2 == 1) {
            const double v = -1.0 / (std::numbers::pi * std::numbers::pi * k * k * d2);
            h[k] = v;
            h[nfft - k] = v;
        }
    }
    fft(h, false);
    std::vector<double> resp(nfft);
    for (size_t k = 0; k < nfft; ++k) {
        double r = h[k].real();
        if (filter == FbpFilter::hann) {
            const double frac = static_cast<double>(std::min(k, nfft - k)) / (nfft / 2);
            r *= 0.5 * (1.0 + std::cos(std::numbers::pi * frac));
        }
        resp[k] = r;
    }
    return resp;
}

// Convolves every sinogram row with the ramp kernel; output scaled by the
// detector spacing so rows approximate the continuous filtered projection.
inline std::vector<double> filter_rows(const Sinogram& sino, double spacing,
                                       FbpFilter filter) {
    const int n = sino.num_detectors;
    const size_t nfft = next_pow2(static_cast<size_t>(2 * n));
    const auto resp = ramp_response(nfft, spacing, filter);
    std::vector<double> out(static_cast<size_t>(sino.num_angles) * n);
    std::vector<std::complex<double>> buf(nfft);
    for (int a = 0; a < sino.num_angles; ++a) {
        std::fill(buf.begin(), buf.end(), std::complex<double>(0.0, 0.0));
        for (int j = 0; j < n; ++j) buf[j] = sino.at(a, j);
        fft(buf, false);
        for (size_t k = 0; k < nfft; ++k) buf[k] *= resp[k];
        fft(buf, true);
        for (int j = 0; j < n; ++j)
            out[static_cast<size_t>(a) * n + j] = buf[j].real() * spacing;
    }
    return out;
}

inline double interp_row(const double* row, int n, double pos) {
    if (pos <= 0.0 || pos >= n - 1) {
        // Outside the filtered support; contribute nothing.
        if (pos == 0.0) return row[0];
        return 0.0;
    }
    const int j = static_cast<int>(pos);
    const double f = pos - j;
    return row[j] * (1.0 - f) + row[j + 1] * f;
}

} // namespace detail

// Filtered backprojection for parallel geometry over [0, pi).
inline Image fbp(const Sinogram& sino, const ParallelGeometry& geom, const GridSpec& grid,
                 FbpFilter filter = FbpFilter::ramp) {
    geom.validate();
    if (geom.num_detectors < 2)
        throw std::invalid_argument("fbp: need at least 2 detectors");
    if (sino.num_angles != geom.num_angles() || sino.num_detectors != geom.num_detectors)
        throw std::invalid_argument("fbp: sinogram dims mismatch geometry");

    const auto q = detail::filter_rows(sino, geom.detector_spacing, filter);
    const int n = geom.num_detectors;
    Image out(grid.width, grid.height, grid.extent);
    const double half = 0.5 * grid.extent;
    const double px = grid.extent / grid.width;
    const double py = grid.extent / grid.height;
    const double dphi = std::numbers::pi / geom.num_angles();
    const double center = 0.5 * (n - 1);

    for (int a = 0; a < geom.num_angles(); ++a) {
        const double c = std::cos(geom.angles[a]);
        const double s = std::sin(geom.angles[a]);
        const double* row = q.data() + static_cast<size_t>(a) * n;
        for (int iy = 0; iy < grid.height; ++iy) {
            const double y = -half + (iy + 0.5) * py;
            double* orow = out.values.data() + static_cast<size_t>(iy) * grid.width;
            for (int ix = 0; ix < grid.width; ++ix) {
                const double x = -half + (ix + 0.5) * px;
                const double pos = (x * c + y * s) / geom.detector_spacing + center;
                orow[ix] += detail::interp_row(row, n, pos);
            }
        }
    }
    for (auto& v : out.values) v *= dphi;
    return out;
}

// Fan-beam FBP for the flat equispaced detector: projections are rebinned to
// the virtual detector through the origin, cosine-weighted, ramp-filtered,
// and backprojected with the 1/U^2 distance weight. Full-scan angles assumed;
// the 1/2 accounts for every line being measured twice over [0, 2*pi).
inline Image fbp_fan(const Sinogram& sino, const FanGeometry& geom, const GridSpec& grid,
                     FbpFilter filter = FbpFilter::ramp) {
    geom.validate();
    if (geom.num_detector_pixels < 2)
        throw std::invalid_argument("fbp_fan: need at least 2 detector pixels");
    if (sino.num_angles != geom.num_angles() ||
        sino.num_detectors != geom.num_detector_pixels)
        throw std::invalid_argument("fbp_fan: sinogram dims mismatch geometry");

    const double R = geom.source_distance;
    const double scale = R / (R + geom.detector_distance);   // real -> virtual detector
    const double du = geom.detector_pixel_spacing * scale;
    const int n = geom.num_detector_pixels;

    Sinogram weighted(sino.num_angles, n);
    for (int a = 0; a < sino.num_angles; ++a)
        for (int j = 0; j < n; ++j) {
            const double u = geom.detector_offset(j) * scale;
            weighted.at(a, j) = sino.at(a, j) * R / std::sqrt(R * R + u * u);
        }
    const auto q = detail::filter_rows(weighted, du, filter);

    Image out(grid.width, grid.height, grid.extent);
    const double half = 0.5 * grid.extent;
    const double px = grid.extent / grid.width;
    const double py = grid.extent / grid.height;
    const double dbeta = 2.0 * std::numbers::pi / geom.num_angles();
    const double center = 0.5 * (n - 1);

    for (int a = 0; a < geom.num_angles(); ++a) {
        const double c = std::cos(geom.angles[a]);
        const double s = std::sin(geom.angles[a]);
        const double* row = q.data() + static_cast<size_t>(a) * n;
        for (int iy = 0; iy < grid.height; ++iy) {
            const double y = -half + (iy + 0.5) * py;
            double* orow = out.values.data() + static_cast<size_t>(iy) * grid.width;
            for (int ix = 0; ix < grid.width; ++ix) {
                const double x = -half + (ix + 0.5) * px;
                const double U = R - (x * c + y * s);
                if (U <= 0.0) continue;
                const double u = R * (-x * s + y * c) / U;
                const double pos = u / du + center;
                orow[ix] += (R * R) / (U * U) * detail::interp_row(row, n, pos);
            }
        }
    }
    for (auto& v : out.values) v *= 0.5 * dbeta;
    return out;
}

// Unfiltered backprojection, normalized like fbp's angular sum. Kept as the
// comparison point for the filtered reconstruction.
inline Image backproject_unfiltered(const Sinogram& sino, const ParallelGeometry& geom,
                                    const GridSpec& grid) {
    const auto A = ProjectionMatrix::parallel(grid, geom);
    Image out = A.adjoint(sino);
    const double dphi = std::numbers::pi / geom.num_angles();
    for (auto& v : out.values) v *= dphi / geom.detector_spacing;
    return out;
}

} // namespace ctkit
