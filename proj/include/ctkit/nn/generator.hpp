#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "ctkit/errors.hpp"
#include "ctkit/image.hpp"
#include "ctkit/nn/graph.hpp"
#include "ctkit/nn/tensor.hpp"
#include "ctkit/rng.hpp"

namespace ctkit::nn {

enum class Activation { linear, leaky_relu, sigmoid };

// One decoder block: nearest-neighbor upsample, same-padded conv, pointwise
// activation.
struct BlockSpec {
    int out_channels = 0;
    int kernel = 3;
    int upsample = 2;
    Activation activation = Activation::leaky_relu;
    bool normalize = false;   // channel-norm between conv and activation
};

struct GeneratorConfig {
    int latent_channels = 16;
    int latent_h = 4;
    int latent_w = 4;
    std::vector<BlockSpec> blocks;
    int split_layer = 2;       // blocks [0, split_layer) form G1
    double leaky_slope = 0.2;

    int output_width() const {
        int w = latent_w;
        for (const auto& b : blocks) w *= b.upsample;
        return w;
    }
    int output_height() const {
        int h = latent_h;
        for (const auto& b : blocks) h *= b.upsample;
        return h;
    }
    int output_channels() const {
        return blocks.empty() ? latent_channels : blocks.back().out_channels;
    }
    // Channel count of the feature maps composed at the split.
    int split_channels() const {
        return split_layer == 0 ? latent_channels : blocks[split_layer - 1].out_channels;
    }
    int block_in_channels(int i) const {
        return i == 0 ? latent_channels : blocks[i - 1].out_channels;
    }

    void validate() const {
        if (latent_channels < 1 || latent_h < 1 || latent_w < 1)
            throw std::invalid_argument("GeneratorConfig: bad latent shape");
        if (blocks.empty()) throw std::invalid_argument("GeneratorConfig: no blocks");
        if (split_layer < 1 || split_layer >= static_cast<int>(blocks.size()))
            throw std::invalid_argument("GeneratorConfig: split_layer must be in [1, blocks)");
        for (const auto& b : blocks) {
            if (b.out_channels < 1 || b.upsample < 1 || b.kernel < 1 || b.kernel % 2 == 0)
                throw std::invalid_argument("GeneratorConfig: bad block spec");
        }
    }

    // Default decoder: latent 16 x (n/16)^2; four 2x blocks with channels
    // 16 -> 64 -> 64 -> 32 -> 1, leaky-ReLU(0.2) inside, sigmoid output,
    // features composed after the second block. Hidden blocks carry channel
    // normalization; without it the stack saturates the output sigmoid at
    // the default learning rate.
    static GeneratorConfig dcgan(int image_size) {
        if (image_size < 16 || image_size % 16 != 0)
            throw std::invalid_argument("GeneratorConfig::dcgan: size must be a multiple of 16");
        GeneratorConfig cfg;
        cfg.latent_channels = 16;
        cfg.latent_h = cfg.latent_w = image_size / 16;
        cfg.blocks = {
            {64, 3, 2, Activation::leaky_relu, true},
            {64, 3, 2, Activation::leaky_relu, true},
            {32, 3, 2, Activation::leaky_relu, true},
            {1, 3, 2, Activation::sigmoid, false},
        };
        cfg.split_layer = 2;
        return cfg;
    }
};

// All trainable state: conv weights/biases of every block plus the per-code
// channel-importance vectors.
struct GeneratorParams {
    std::vector<Tensor> conv_w;
    std::vector<Tensor> conv_b;
    std::vector<Tensor> alphas;

    std::vector<Tensor*> trainable(bool include_alphas = true) {
        std::vector<Tensor*> out;
        for (size_t i = 0; i < conv_w.size(); ++i) {
            out.push_back(&conv_w[i]);
            out.push_back(&conv_b[i]);
        }
        if (include_alphas)
            for (auto& a : alphas) out.push_back(&a);
        return out;
    }

    void zero_grad() {
        for (auto& t : conv_w) t.zero_grad();
        for (auto& t : conv_b) t.zero_grad();
        for (auto& t : alphas) t.zero_grad();
    }

    bool values_finite() const {
        for (const auto& t : conv_w)
            if (!t.values_finite()) return false;
        for (const auto& t : conv_b)
            if (!t.values_finite()) return false;
        for (const auto& t : alphas)
            if (!t.values_finite()) return false;
        return true;
    }

    size_t num_scalars() const {
        size_t n = 0;
        for (const auto& t : conv_w) n += t.size();
        for (const auto& t : conv_b) n += t.size();
        for (const auto& t : alphas) n += t.size();
        return n;
    }
};

// He-uniform conv weights, zero biases, all-ones channel importance.
inline GeneratorParams init_generator_params(const GeneratorConfig& cfg, int num_codes,
                                             uint64_t seed) {
    cfg.validate();
    if (num_codes < 1) throw std::invalid_argument("init_generator_params: num_codes >= 1");
    GeneratorParams p;
    for (size_t i = 0; i < cfg.blocks.size(); ++i) {
        const auto& b = cfg.blocks[i];
        const int cin = cfg.block_in_channels(static_cast<int>(i));
        Tensor w({b.out_channels, cin, b.kernel, b.kernel});
        const double limit = std::sqrt(6.0 / (cin * b.kernel * b.kernel));
        ctkit::Rng rng(ctkit::mix_seed(seed, i));
        for (auto& x : w.v) x = rng.uniform(-limit, limit);
        p.conv_w.push_back(std::move(w));
        p.conv_b.emplace_back(std::vector<int>{b.out_channels});
    }
    for (int n = 0; n < num_codes; ++n)
        p.alphas.emplace_back(std::vector<int>{cfg.split_channels()}, 1.0);
    return p;
}

// The N fixed Gaussian inputs; sampled once per run and never trained. Code
// n's stream depends only on (seed, n), so code 0 is shared across different
// N at the same seed.
struct LatentCodes {
    std::vector<Tensor> codes;
    int count() const { return static_cast<int>(codes.size()); }
};

inline LatentCodes sample_latent_codes(const GeneratorConfig& cfg, int n, uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample_latent_codes: need n >= 1");
    LatentCodes lc;
    for (int i = 0; i < n; ++i) {
        Tensor z({cfg.latent_channels, cfg.latent_h, cfg.latent_w});
        ctkit::Rng rng(ctkit::mix_seed(seed, i));
        for (auto& x : z.v) x = rng.normal();
        lc.codes.push_back(std::move(z));
    }
    return lc;
}

inline Node* build_block(Graph& g, Node* x, const BlockSpec& b, Tensor* w, Tensor* bias,
                         double slope) {
    Node* n = x;
    if (b.upsample > 1) n = g.upsample_nearest(n, b.upsample);
    n = g.conv2d(n, w, bias);
    if (b.normalize) n = g.channel_norm(n);
    switch (b.activation) {
        case Activation::leaky_relu: return g.leaky_relu(n, slope);
        case Activation::sigmoid: return g.sigmoid(n);
        case Activation::linear: return n;
    }
    return n;
}

inline Node* build_g1(Graph& g, Node* z, const GeneratorConfig& cfg, GeneratorParams& p) {
    Node* n = z;
    for (int i = 0; i < cfg.split_layer; ++i)
        n = build_block(g, n, cfg.blocks[i], &p.conv_w[i], &p.conv_b[i], cfg.leaky_slope);
    return n;
}

inline Node* build_g2(Graph& g, Node* feat, const GeneratorConfig& cfg, GeneratorParams& p) {
    Node* n = feat;
    for (int i = cfg.split_layer; i < static_cast<int>(cfg.blocks.size()); ++i)
        n = build_block(g, n, cfg.blocks[i], &p.conv_w[i], &p.conv_b[i], cfg.leaky_slope);
    return n;
}

// sum_n F_n * alpha_n, channel-wise, in fixed code order.
inline Node* build_compose(Graph& g, const std::vector<Node*>& features, GeneratorParams& p) {
    if (features.empty() || features.size() > p.alphas.size())
        throw std::invalid_argument("build_compose: feature/alpha count mismatch");
    Node* acc = g.channel_mul(features[0], &p.alphas[0]);
    for (size_t n = 1; n < features.size(); ++n)
        acc = g.add(acc, g.channel_mul(features[n], &p.alphas[n]));
    return acc;
}

struct GeneratorHandles {
    std::vector<Node*> inputs;     // latent leaves
    std::vector<Node*> features;   // F_n at the split layer
    Node* composed = nullptr;      // pre-G2 tensor (null on the single-code path)
    Node* output = nullptr;
};

// Builds the full forward pass. With use_alphas the features are composed
// per the multi-code rule; without it (single code) the generator is the
// plain G2(G1(z)) chain.
inline GeneratorHandles build_generator(Graph& g, const LatentCodes& codes,
                                        GeneratorParams& p, const GeneratorConfig& cfg,
                                        bool use_alphas = true) {
    cfg.validate();
    if (codes.count() < 1) throw std::invalid_argument("build_generator: no latent codes");
    if (!use_alphas && codes.count() != 1)
        throw std::invalid_argument("build_generator: plain path needs exactly one code");
    GeneratorHandles hs;
    for (const auto& z : codes.codes) {
        Node* in = g.input(z);
        hs.inputs.push_back(in);
        hs.features.push_back(build_g1(g, in, cfg, p));
    }
    Node* pre_g2 = hs.features[0];
    if (use_alphas) {
        hs.composed = build_compose(g, hs.features, p);
        pre_g2 = hs.composed;
    }
    hs.output = build_g2(g, pre_g2, cfg, p);
    return hs;
}

// Feature map of one latent code at the split layer.
inline Tensor g1_forward(const Tensor& z, GeneratorParams& p, const GeneratorConfig& cfg) {
    Graph g;
    Node* f = build_g1(g, g.input(z), cfg, p);
    Tensor out({f->c, f->h, f->w});
    out.v = f->v;
    return out;
}

inline ctkit::Image node_to_image(const Node* n, double extent = 1.0) {
    if (n->c != 1) throw std::invalid_argument("node_to_image: want a single channel");
    ctkit::Image img(n->w, n->h, extent);
    img.values = n->v;
    return img;
}

// G2(sum_n G1(z_n) * alpha_n) as an image in (0,1).
inline ctkit::Image mcdip_forward(const LatentCodes& codes, GeneratorParams& p,
                                  const GeneratorConfig& cfg, double extent = 1.0) {
    Graph g;
    auto hs = build_generator(g, codes, p, cfg, true);
    return node_to_image(hs.output, extent);
}

// ---- checkpointing: shape manifest + f64 payload ----

namespace detail {

inline void write_tensor(std::ofstream& f, const Tensor& t) {
    const uint32_t nd = static_cast<uint32_t>(t.dims.size());
    f.write(reinterpret_cast<const char*>(&nd), 4);
    for (int d : t.dims) {
        const uint32_t u = static_cast<uint32_t>(d);
        f.write(reinterpret_cast<const char*>(&u), 4);
    }
    f.write(reinterpret_cast<const char*>(t.v.data()),
            static_cast<std::streamsize>(t.v.size() * sizeof(double)));
}

inline Tensor read_tensor(std::ifstream& f, const std::string& path) {
    uint32_t nd = 0;
    f.read(reinterpret_cast<char*>(&nd), 4);
    if (!f || nd == 0 || nd > 8) throw ctkit::IoError("corrupt checkpoint: " + path);
    std::vector<int> dims(nd);
    for (auto& d : dims) {
        uint32_t u = 0;
        f.read(reinterpret_cast<char*>(&u), 4);
        d = static_cast<int>(u);
    }
    Tensor t(dims);
    f.read(reinterpret_cast<char*>(t.v.data()),
           static_cast<std::streamsize>(t.v.size() * sizeof(double)));
    if (!f) throw ctkit::IoError("truncated checkpoint: " + path);
    return t;
}

} // namespace detail

inline void save_params(const std::string& path, const GeneratorParams& p) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ctkit::IoError("cannot open for writing: " + path);
    f << "CTKP1\n";
    const uint32_t counts[3] = {static_cast<uint32_t>(p.conv_w.size()),
                                static_cast<uint32_t>(p.conv_b.size()),
                                static_cast<uint32_t>(p.alphas.size())};
    f.write(reinterpret_cast<const char*>(counts), sizeof(counts));
    for (const auto& t : p.conv_w) detail::write_tensor(f, t);
    for (const auto& t : p.conv_b) detail::write_tensor(f, t);
    for (const auto& t : p.alphas) detail::write_tensor(f, t);
    if (!f) throw ctkit::IoError("write failed: " + path);
}

inline GeneratorParams load_params(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ctkit::IoError("cannot open for reading: " + path);
    std::string magic;
    std::getline(f, magic);
    if (magic != "CTKP1") throw ctkit::IoError("not a checkpoint file: " + path);
    uint32_t counts[3] = {0, 0, 0};
    f.read(reinterpret_cast<char*>(counts), sizeof(counts));
    if (!f) throw ctkit::IoError("corrupt checkpoint: " + path);
    GeneratorParams p;
    for (uint32_t i = 0; i < counts[0]; ++i) p.conv_w.push_back(detail::read_tensor(f, path));
    for (uint32_t i = 0; i < counts[1]; ++i) p.conv_b.push_back(detail::read_tensor(f, path));
    for (uint32_t i = 0; i < counts[2]; ++i) p.alphas.push_back(detail::read_tensor(f, path));
    return p;
}

} // namespace ctkit::nn
