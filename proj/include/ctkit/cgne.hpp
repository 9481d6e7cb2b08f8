#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "ctkit/image.hpp"
#include "ctkit/projector.hpp"

namespace ctkit {

// Conjugate gradient on the normal equations A^T A x = A^T y (CGLS form,
// which applies A and A^T without forming A^T A). Zero initial iterate; the
// data residual ||A x_k - y|| is non-increasing over k.
inline Image cgne(const Sinogram& y, const ProjectionMatrix& A, int iterations,
                  const std::function<void(int, const Image&)>& observer = {}) {
    if (iterations < 1) throw std::invalid_argument("cgne: iterations must be >= 1");
    if (y.num_angles != A.num_angles() || y.num_detectors != A.num_detectors())
        throw std::invalid_argument("cgne: sinogram dims mismatch operator");

    const GridSpec& g = A.grid();
    Image x(g.width, g.height, g.extent);
    std::vector<double> r = y.values;          // y - A x, x = 0
    std::vector<double> s, p, q;
    A.adjoint_into(r, s);
    p = s;
    double gamma = dot(s, s);
    if (gamma == 0.0) return x;

    for (int k = 0; k < iterations; ++k) {
        A.forward_into(p, q);
        const double qq = dot(q, q);
        if (qq == 0.0) break;
        const double alpha = gamma / qq;
        for (size_t i = 0; i < x.values.size(); ++i) x.values[i] += alpha * p[i];
        for (size_t i = 0; i < r.size(); ++i) r[i] -= alpha * q[i];
        A.adjoint_into(r, s);
        const double gamma_next = dot(s, s);
        if (observer) observer(k + 1, x);
        if (gamma_next == 0.0) break;
        const double beta = gamma_next / gamma;
        for (size_t i = 0; i < p.size(); ++i) p[i] = s[i] + beta * p[i];
        gamma = gamma_next;
    }
    return x;
}

} // namespace ctkit
