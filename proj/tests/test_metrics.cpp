#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ctkit/metrics.hpp"
#include "ctkit/rng.hpp"

using namespace ctkit;

namespace {

Image checkerboard(int n) {
    Image img(n, n);
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) img.at(x, y) = (x + y) % 2 ? 1.0 : 0.0;
    return img;
}

} // namespace

TEST_CASE("psnr: hand case, identical images, constant truth") {
    SECTION("checkerboard + 0.1 offset gives exactly 20 dB") {
        auto x = checkerboard(8);
        Image xhat = x;
        for (auto& v : xhat.values) v += 0.1;
        REQUIRE(psnr(xhat, x) == Catch::Approx(20.0).margin(1e-9));
    }
    SECTION("identical images return +infinity") {
        auto x = checkerboard(8);
        REQUIRE(std::isinf(psnr(x, x)));
        REQUIRE(psnr(x, x) > 0.0);
    }
    SECTION("constant ground truth rejected (L = 0)") {
        Image c(4, 4, 1.0, 0.5);
        Image other(4, 4, 1.0, 0.25);
        REQUIRE_THROWS_AS(psnr(other, c), std::invalid_argument);
    }
    SECTION("dimension mismatch rejected") {
        Image a(4, 4), b(5, 4);
        REQUIRE_THROWS_AS(psnr(a, b), std::invalid_argument);
    }
    SECTION("matches an independent one-line evaluation on a random pair") {
        Rng rng(4);
        Image x(6, 6), xhat(6, 6);
        for (auto& v : x.values) v = rng.uniform();
        for (auto& v : xhat.values) v = rng.uniform();
        const auto [mn, mx] = std::minmax_element(x.values.begin(), x.values.end());
        double mse = 0.0;
        for (size_t i = 0; i < x.values.size(); ++i)
            mse += (xhat.values[i] - x.values[i]) * (xhat.values[i] - x.values[i]);
        mse /= x.values.size();
        const double expect = 10.0 * std::log10((*mx - *mn) * (*mx - *mn) / mse);
        REQUIRE(psnr(xhat, x) == Catch::Approx(expect).margin(1e-12));
    }
}

TEST_CASE("psnr strictly decreases with noise amplitude") {
    auto x = checkerboard(16);
    double prev = std::numeric_limits<double>::infinity();
    for (double amp : {0.01, 0.05, 0.1}) {
        Rng rng(11);   // same noise pattern, scaled
        Image xhat = x;
        for (auto& v : xhat.values) v += amp * rng.normal();
        const double p = psnr(xhat, x);
        REQUIRE(p < prev);
        prev = p;
    }
}

TEST_CASE("ssim: identity, hand-evaluated single window, flat-vs-noise") {
    SECTION("identical images give exactly 1") {
        auto x = checkerboard(9);
        REQUIRE(ssim(x, x) == Catch::Approx(1.0).margin(1e-15));
    }
    SECTION("single-window 3x3 case matches frozen hand evaluation") {
        // Population statistics, window = image, L = 1; oracle evaluated
        // independently from the printed SSIM formula.
        Image x(3, 3), xhat(3, 3);
        x.values = {0.0, 0.5, 1.0, 0.25, 0.75, 0.5, 1.0, 0.0, 0.5};
        xhat.values = {0.1, 0.4, 0.9, 0.35, 0.65, 0.55, 0.8, 0.2, 0.45};
        SsimSpec spec;
        spec.window = 3;
        REQUIRE(ssim(xhat, x, spec) == Catch::Approx(0.9206364949498359).margin(1e-9));
        REQUIRE(psnr(xhat, x) == Catch::Approx(18.23908740944319).margin(1e-9));
    }
    SECTION("constant reconstruction scores near zero against noise") {
        Rng rng(21);
        Image x(32, 32);
        for (auto& v : x.values) v = rng.uniform();
        Image flat(32, 32, 1.0, 0.5);
        REQUIRE(ssim(flat, x) < 0.1);
    }
    SECTION("window larger than image rejected") {
        Image a(4, 4), b(4, 4);
        b.values[0] = 1.0;
        SsimSpec spec;
        spec.window = 5;
        REQUIRE_THROWS_AS(ssim(a, b, spec), std::invalid_argument);
    }
    SECTION("spec validation") {
        SsimSpec spec;
        spec.window = 4;
        REQUIRE_THROWS_AS(spec.validate(), std::invalid_argument);
        spec.window = 7;
        spec.k1 = 0.0;
        REQUIRE_THROWS_AS(spec.validate(), std::invalid_argument);
    }
}

TEST_CASE("ssim luminance-shift symmetry for equal-mean windows") {
    // L = max(x) - min(x) is shift-invariant, so C1 and C2 are held
    // automatically. The luminance quotient is exactly 1 whenever the two
    // window means agree, making the score shift-invariant for equal-mean
    // pairs; a permutation of the truth has the same mean by construction.
    Image x(3, 3), xhat(3, 3);
    x.values = {0.1, 0.9, 0.3, 0.7, 0.5, 0.2, 0.8, 0.4, 0.6};
    xhat.values = {0.6, 0.4, 0.8, 0.2, 0.5, 0.7, 0.3, 0.9, 0.1};
    SsimSpec spec;
    spec.window = 3;
    const double base = ssim(xhat, x, spec);
    for (double shift : {-3.0, 0.5, 42.0}) {
        Image xs = x, xhs = xhat;
        for (auto& v : xs.values) v += shift;
        for (auto& v : xhs.values) v += shift;
        REQUIRE(ssim(xhs, xs, spec) == Catch::Approx(base).margin(1e-12));
    }
    REQUIRE(ssim(xhat, x, spec) == base);   // deterministic pure function
}
