#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ctkit/image.hpp"

namespace ctkit {

// PSNR in dB with dynamic range L = max(x) - min(x) taken from the ground
// truth only. Identical images return +infinity.
inline double psnr(const Image& xhat, const Image& x) {
    if (!xhat.same_shape(x)) throw std::invalid_argument("psnr: shape mismatch");
    const auto [mn, mx] = std::minmax_element(x.values.begin(), x.values.end());
    const double range = *mx - *mn;
    if (!(range > 0.0)) throw std::invalid_argument("psnr: constant ground truth (L = 0)");
    double mse = 0.0;
    for (size_t i = 0; i < x.values.size(); ++i) {
        const double d = xhat.values[i] - x.values[i];
        mse += d * d;
    }
    mse /= static_cast<double>(x.values.size());
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(range * range / mse);
}

struct SsimSpec {
    int window = 7;      // odd, >= 3; uniform square window
    double k1 = 0.01;
    double k2 = 0.03;
    int stride = 1;

    void validate() const {
        if (window < 3 || window % 2 == 0)
            throw std::invalid_argument("SsimSpec: window must be odd and >= 3");
        if (!(k1 > 0.0) || !(k2 > 0.0))
            throw std::invalid_argument("SsimSpec: K1, K2 must be > 0");
        if (stride < 1) throw std::invalid_argument("SsimSpec: stride must be >= 1");
    }
};

// Mean over sliding windows (valid placement, population statistics) of
//   (2 mu1 mu2 + C1)(2 cov + C2) / ((mu1^2 + mu2^2 + C1)(var1 + var2 + C2)),
// with C1 = (K1 L)^2, C2 = (K2 L)^2 and L from the ground truth x.
inline double ssim(const Image& xhat, const Image& x, const SsimSpec& spec = {}) {
    spec.validate();
    if (!xhat.same_shape(x)) throw std::invalid_argument("ssim: shape mismatch");
    if (spec.window > x.width || spec.window > x.height)
        throw std::invalid_argument("ssim: window larger than image");

    const auto [mn, mx] = std::minmax_element(x.values.begin(), x.values.end());
    const double range = *mx - *mn;
    const double c1 = (spec.k1 * range) * (spec.k1 * range);
    const double c2 = (spec.k2 * range) * (spec.k2 * range);
    const int win = spec.window;
    const double npix = static_cast<double>(win) * win;

    double acc = 0.0;
    long count = 0;
    for (int y0 = 0; y0 + win <= x.height; y0 += spec.stride)
        for (int x0 = 0; x0 + win <= x.width; x0 += spec.stride) {
            double s1 = 0, s2 = 0, s11 = 0, s22 = 0, s12 = 0;
            for (int dy = 0; dy < win; ++dy)
                for (int dx = 0; dx < win; ++dx) {
                    const double a = xhat.at(x0 + dx, y0 + dy);
                    const double b = x.at(x0 + dx, y0 + dy);
                    s1 += a;
                    s2 += b;
                    s11 += a * a;
                    s22 += b * b;
                    s12 += a * b;
                }
            const double mu1 = s1 / npix, mu2 = s2 / npix;
            const double var1 = s11 / npix - mu1 * mu1;
            const double var2 = s22 / npix - mu2 * mu2;
            const double cov = s12 / npix - mu1 * mu2;
            acc += ((2.0 * mu1 * mu2 + c1) * (2.0 * cov + c2)) /
                   ((mu1 * mu1 + mu2 * mu2 + c1) * (var1 + var2 + c2));
            ++count;
        }
    return acc / static_cast<double>(count);
}

} // namespace ctkit
