#pragma once

#include <algorithm>
#include <cstring>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "ctkit/errors.hpp"
#include "ctkit/nn/tensor.hpp"

namespace ctkit::nn {

// One value in the computation graph; activations are (C, H, W). Gradients
// accumulate in g during the reverse sweep.
struct Node {
    int c = 1, h = 1, w = 1;
    std::vector<double> v;
    std::vector<double> g;
    std::function<void()> back;   // pulls this->g into parents / parameters

    size_t size() const { return static_cast<size_t>(c) * h * w; }
    size_t plane() const { return static_cast<size_t>(h) * w; }
};

// Dynamic reverse-mode tape. A Graph is built afresh for every forward pass;
// ops referencing Tensor* parameters accumulate into the tensor's grad, so
// callers zero parameter grads between steps.
class Graph {
    using MatRM = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  public:
    Node* input(const Tensor& t) {
        if (t.dims.size() != 3) throw std::invalid_argument("Graph::input: want {C,H,W}");
        Node* n = make(t.dims[0], t.dims[1], t.dims[2]);
        n->v = t.v;
        check(n, "input");
        return n;
    }

    // Same-padded cross-correlation with odd kernel; w dims {Cout,Cin,K,K},
    // b dims {Cout}. All GEMM operands live in Eigen-owned storage so the
    // product kernel sees one fixed alignment: results are bit-reproducible
    // across runs regardless of where tensor buffers happen to land on the
    // heap. The im2col matrix and the forward-time weights are kept for the
    // backward GEMMs.
    Node* conv2d(Node* x, Tensor* w, Tensor* b) {
        if (w->dims.size() != 4 || w->dims[2] != w->dims[3] || w->dims[2] % 2 == 0)
            throw std::invalid_argument("conv2d: weight must be {Cout,Cin,K,K} with odd K");
        const int cout = w->dims[0], cin = w->dims[1], k = w->dims[2];
        if (cin != x->c) throw std::invalid_argument("conv2d: input channel mismatch");
        if (b->dims != std::vector<int>{cout})
            throw std::invalid_argument("conv2d: bias must be {Cout}");

        Node* out = make(cout, x->h, x->w);
        const int hw = x->h * x->w, kk = cin * k * k;
        auto col = std::make_shared<MatRM>(kk, hw);
        col->setZero();
        im2col(*x, k, col->data());
        auto wmat = std::make_shared<MatRM>(cout, kk);
        std::memcpy(wmat->data(), w->v.data(), sizeof(double) * w->v.size());
        {
            MatRM mout(cout, hw);
            mout.noalias() = (*wmat) * (*col);
            for (int oc = 0; oc < cout; ++oc) {
                const double bias = b->v[oc];
                double* dst = out->v.data() + static_cast<size_t>(oc) * hw;
                const double* src = mout.data() + static_cast<size_t>(oc) * hw;
                for (int i = 0; i < hw; ++i) dst[i] = src[i] + bias;
            }
        }
        check(out, "conv2d");
        out->back = [x, w, b, out, col, wmat, cout, k, hw, kk] {
            MatRM mdout(cout, hw);
            std::memcpy(mdout.data(), out->g.data(), sizeof(double) * out->g.size());
            MatRM mdw(cout, kk);
            mdw.noalias() = mdout * col->transpose();
            for (size_t i = 0; i < w->g.size(); ++i) w->g[i] += mdw.data()[i];
            for (int oc = 0; oc < cout; ++oc) b->g[oc] += mdout.row(oc).sum();
            MatRM mdcol(kk, hw);
            mdcol.noalias() = wmat->transpose() * mdout;
            col2im_add(mdcol.data(), k, *x);
        };
        return out;
    }

    Node* upsample_nearest(Node* x, int factor) {
        if (factor < 1) throw std::invalid_argument("upsample_nearest: factor >= 1");
        Node* out = make(x->c, x->h * factor, x->w * factor);
        for (int c = 0; c < x->c; ++c) {
            const double* src = x->v.data() + c * x->plane();
            double* dst = out->v.data() + c * out->plane();
            for (int y = 0; y < out->h; ++y) {
                const double* srow = src + (y / factor) * x->w;
                double* drow = dst + static_cast<size_t>(y) * out->w;
                for (int xx = 0; xx < out->w; ++xx) drow[xx] = srow[xx / factor];
            }
        }
        check(out, "upsample_nearest");
        out->back = [x, out, factor] {
            for (int c = 0; c < x->c; ++c) {
                double* dst = x->g.data() + c * x->plane();
                const double* src = out->g.data() + c * out->plane();
                for (int y = 0; y < out->h; ++y) {
                    const double* srow = src + static_cast<size_t>(y) * out->w;
                    double* drow = dst + (y / factor) * x->w;
                    for (int xx = 0; xx < out->w; ++xx) drow[xx / factor] += srow[xx];
                }
            }
        };
        return out;
    }

    Node* leaky_relu(Node* x, double negative_slope) {
        Node* out = make(x->c, x->h, x->w);
        for (size_t i = 0; i < x->v.size(); ++i)
            out->v[i] = x->v[i] >= 0.0 ? x->v[i] : negative_slope * x->v[i];
        check(out, "leaky_relu");
        out->back = [x, out, negative_slope] {
            for (size_t i = 0; i < x->v.size(); ++i)
                x->g[i] += out->g[i] * (x->v[i] >= 0.0 ? 1.0 : negative_slope);
        };
        return out;
    }

    Node* sigmoid(Node* x) {
        Node* out = make(x->c, x->h, x->w);
        for (size_t i = 0; i < x->v.size(); ++i)
            out->v[i] = 1.0 / (1.0 + std::exp(-x->v[i]));
        check(out, "sigmoid");
        out->back = [x, out] {
            for (size_t i = 0; i < x->v.size(); ++i)
                x->g[i] += out->g[i] * out->v[i] * (1.0 - out->v[i]);
        };
        return out;
    }

    Node* add(Node* a, Node* b) {
        if (a->c != b->c || a->h != b->h || a->w != b->w)
            throw std::invalid_argument("add: shape mismatch");
        Node* out = make(a->c, a->h, a->w);
        for (size_t i = 0; i < a->v.size(); ++i) out->v[i] = a->v[i] + b->v[i];
        check(out, "add");
        out->back = [a, b, out] {
            for (size_t i = 0; i < out->g.size(); ++i) {
                a->g[i] += out->g[i];
                b->g[i] += out->g[i];
            }
        };
        return out;
    }

    Node* scale(Node* x, double factor) {
        Node* out = make(x->c, x->h, x->w);
        for (size_t i = 0; i < x->v.size(); ++i) out->v[i] = factor * x->v[i];
        check(out, "scale");
        out->back = [x, out, factor] {
            for (size_t i = 0; i < out->g.size(); ++i) x->g[i] += factor * out->g[i];
        };
        return out;
    }

    // Per-channel standardization over the spatial plane:
    // y = (x - mean_c) / sqrt(var_c + eps). Non-trainable; keeps activations
    // at unit scale so deep stacks stay in the optimizer's stable regime.
    Node* channel_norm(Node* x, double eps = 1e-6) {
        Node* out = make(x->c, x->h, x->w);
        const double n = static_cast<double>(x->plane());
        auto inv = std::make_shared<std::vector<double>>(x->c);
        for (int c = 0; c < x->c; ++c) {
            const double* src = x->v.data() + c * x->plane();
            double mu = 0.0;
            for (size_t i = 0; i < x->plane(); ++i) mu += src[i];
            mu /= n;
            double var = 0.0;
            for (size_t i = 0; i < x->plane(); ++i) {
                const double d = src[i] - mu;
                var += d * d;
            }
            var /= n;
            const double iv = 1.0 / std::sqrt(var + eps);
            (*inv)[c] = iv;
            double* dst = out->v.data() + c * out->plane();
            for (size_t i = 0; i < x->plane(); ++i) dst[i] = (src[i] - mu) * iv;
        }
        check(out, "channel_norm");
        out->back = [x, out, inv] {
            const double n = static_cast<double>(x->plane());
            for (int c = 0; c < x->c; ++c) {
                const double* y = out->v.data() + c * out->plane();
                const double* gy = out->g.data() + c * out->plane();
                double* gx = x->g.data() + c * x->plane();
                double gsum = 0.0, gysum = 0.0;
                for (size_t i = 0; i < x->plane(); ++i) {
                    gsum += gy[i];
                    gysum += gy[i] * y[i];
                }
                const double gmean = gsum / n, gymean = gysum / n;
                const double iv = (*inv)[c];
                for (size_t i = 0; i < x->plane(); ++i)
                    gx[i] += iv * (gy[i] - gmean - y[i] * gymean);
            }
        };
        return out;
    }

    // out[c,i,j] = x[c,i,j] * alpha[c]; alpha dims {C}.
    Node* channel_mul(Node* x, Tensor* alpha) {
        if (alpha->dims != std::vector<int>{x->c})
            throw std::invalid_argument("channel_mul: alpha length must equal channels");
        Node* out = make(x->c, x->h, x->w);
        for (int c = 0; c < x->c; ++c) {
            const double a = alpha->v[c];
            const double* src = x->v.data() + c * x->plane();
            double* dst = out->v.data() + c * out->plane();
            for (size_t i = 0; i < x->plane(); ++i) dst[i] = a * src[i];
        }
        check(out, "channel_mul");
        out->back = [x, alpha, out] {
            for (int c = 0; c < x->c; ++c) {
                const double a = alpha->v[c];
                const double* src = x->v.data() + c * x->plane();
                const double* go = out->g.data() + c * out->plane();
                double* gx = x->g.data() + c * x->plane();
                double acc = 0.0;
                for (size_t i = 0; i < x->plane(); ++i) {
                    gx[i] += a * go[i];
                    acc += go[i] * src[i];
                }
                alpha->g[c] += acc;
            }
        };
        return out;
    }

    // Reverse sweep from `out` seeded with dLoss/dOut.
    void backward(Node* out, const std::vector<double>& seed) {
        if (seed.size() != out->v.size())
            throw std::invalid_argument("Graph::backward: seed size mismatch");
        out->g = seed;
        for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it)
            if ((*it)->back && !(*it)->g.empty()) (*it)->back();
    }

    size_t num_nodes() const { return nodes_.size(); }

  private:
    Node* make(int c, int h, int w) {
        auto n = std::make_unique<Node>();
        n->c = c;
        n->h = h;
        n->w = w;
        n->v.assign(n->size(), 0.0);
        n->g.assign(n->size(), 0.0);
        nodes_.push_back(std::move(n));
        return nodes_.back().get();
    }

    static void check(const Node* n, const char* op) {
        for (double x : n->v)
            if (!std::isfinite(x))
                throw NumericError(std::string("non-finite value after op ") + op);
    }

    static void im2col(const Node& x, int k, double* col) {
        const int p = k / 2, h = x.h, w = x.w, hw = h * w;
        for (int c = 0; c < x.c; ++c) {
            const double* src = x.v.data() + c * x.plane();
            for (int dy = 0; dy < k; ++dy)
                for (int dx = 0; dx < k; ++dx) {
                    double* dst = col + (static_cast<size_t>(c) * k * k + dy * k + dx) * hw;
                    const int sy = dy - p, sx = dx - p;
                    const int y0 = std::max(0, -sy), y1 = std::min(h, h - sy);
                    const int x0 = std::max(0, -sx), x1 = std::min(w, w - sx);
                    for (int y = y0; y < y1; ++y) {
                        const double* srow = src + (y + sy) * w + sx;
                        double* drow = dst + static_cast<size_t>(y) * w;
                        for (int xx = x0; xx < x1; ++xx) drow[xx] = srow[xx];
                    }
                }
        }
    }

    static void col2im_add(const double* col, int k, Node& x) {
        const int p = k / 2, h = x.h, w = x.w, hw = h * w;
        for (int c = 0; c < x.c; ++c) {
            double* dst = x.g.data() + c * x.plane();
            for (int dy = 0; dy < k; ++dy)
                for (int dx = 0; dx < k; ++dx) {
                    const double* src = col +
                                        (static_cast<size_t>(c) * k * k + dy * k + dx) * hw;
                    const int sy = dy - p, sx = dx - p;
                    const int y0 = std::max(0, -sy), y1 = std::min(h, h - sy);
                    const int x0 = std::max(0, -sx), x1 = std::min(w, w - sx);
                    for (int y = y0; y < y1; ++y) {
                        const double* srow = src + static_cast<size_t>(y) * w;
                        double* drow = dst + (y + sy) * w + sx;
                        for (int xx = x0; xx < x1; ++xx) drow[xx] += srow[xx];
                    }
                }
        }
    }

    std::vector<std::unique_ptr<Node>> nodes_;
};

} // namespace ctkit::nn
