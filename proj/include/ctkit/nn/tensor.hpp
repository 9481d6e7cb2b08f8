#pragma once

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace ctkit::nn {

// Dense f64 value/gradient pair. Activations use dims {C, H, W}, conv
// weights {Cout, Cin, K, K}, vectors {N}.
struct Tensor {
    std::vector<int> dims;
    std::vector<double> v;
    std::vector<double> g;

    Tensor() = default;
    explicit Tensor(std::vector<int> d, double fill = 0.0) : dims(std::move(d)) {
        for (int x : dims)
            if (x < 1) throw std::invalid_argument("Tensor: dims must be >= 1");
        v.assign(size(), fill);
        g.assign(size(), 0.0);
    }

    size_t size() const {
        size_t s = 1;
        for (int x : dims) s *= static_cast<size_t>(x);
        return s;
    }

    void zero_grad() { std::fill(g.begin(), g.end(), 0.0); }

    bool values_finite() const {
        for (double x : v)
            if (!std::isfinite(x)) return false;
        return true;
    }
    bool grads_finite() const {
        for (double x : g)
            if (!std::isfinite(x)) return false;
        return true;
    }
};

} // namespace ctkit::nn
