#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include <zlib.h>

#include "ctkit/errors.hpp"
#include "ctkit/image.hpp"

namespace ctkit {

namespace detail {

inline void png_be32(std::vector<unsigned char>& v, uint32_t x) {
    v.push_back((x >> 24) & 0xFF);
    v.push_back((x >> 16) & 0xFF);
    v.push_back((x >> 8) & 0xFF);
    v.push_back(x & 0xFF);
}

inline void png_chunk(std::ofstream& f, const char type[4],
                      const std::vector<unsigned char>& data) {
    std::vector<unsigned char> head;
    png_be32(head, static_cast<uint32_t>(data.size()));
    f.write(reinterpret_cast<const char*>(head.data()), 4);
    f.write(type, 4);
    if (!data.empty())
        f.write(reinterpret_cast<const char*>(data.data()),
                static_cast<std::streamsize>(data.size()));
    uLong crc = crc32(0L, Z_NULL, 0);
    crc = crc32(crc, reinterpret_cast<const Bytef*>(type), 4);
    if (!data.empty()) crc = crc32(crc, data.data(), static_cast<uInt>(data.size()));
    std::vector<unsigned char> tail;
    png_be32(tail, static_cast<uint32_t>(crc));
    f.write(reinterpret_cast<const char*>(tail.data()), 4);
}

// Quantizes values to [0, 2^bits - 1] over [lo, hi], clamping outside.
inline std::vector<unsigned char> quantize_rows(const Image& img, double lo, double hi,
                                                int bit_depth, bool flip_y) {
    const double span = hi > lo ? hi - lo : 1.0;
    const int bytes = bit_depth / 8;
    std::vector<unsigned char> raw;
    raw.reserve(static_cast<size_t>(img.height) * (1 + static_cast<size_t>(img.width) * bytes));
    const double maxq = bit_depth == 8 ? 255.0 : 65535.0;
    for (int r = 0; r < img.height; ++r) {
        // Row 0 of the file is the top of the picture; image iy grows upward.
        const int iy = flip_y ? img.height - 1 - r : r;
        raw.push_back(0);   // filter type none
        for (int ix = 0; ix < img.width; ++ix) {
            const double t = std::clamp((img.at(ix, iy) - lo) / span, 0.0, 1.0);
            const uint32_t q = static_cast<uint32_t>(std::lround(t * maxq));
            if (bit_depth == 8) {
                raw.push_back(static_cast<unsigned char>(q));
            } else {
                raw.push_back(static_cast<unsigned char>(q >> 8));
                raw.push_back(static_cast<unsigned char>(q & 0xFF));
            }
        }
    }
    return raw;
}

} // namespace detail

// 8- or 16-bit grayscale PNG, quantized over [lo, hi].
inline void write_png_gray(const std::string& path, const Image& img, double lo = 0.0,
                           double hi = 1.0, int bit_depth = 8) {
    if (bit_depth != 8 && bit_depth != 16)
        throw std::invalid_argument("write_png_gray: bit depth must be 8 or 16");
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for writing: " + path);

    static const unsigned char sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};
    f.write(reinterpret_cast<const char*>(sig), 8);

    std::vector<unsigned char> ihdr;
    detail::png_be32(ihdr, static_cast<uint32_t>(img.width));
    detail::png_be32(ihdr, static_cast<uint32_t>(img.height));
    ihdr.push_back(static_cast<unsigned char>(bit_depth));
    ihdr.push_back(0);   // grayscale
    ihdr.push_back(0);
    ihdr.push_back(0);
    ihdr.push_back(0);
    detail::png_chunk(f, "IHDR", ihdr);

    const auto raw = detail::quantize_rows(img, lo, hi, bit_depth, true);
    uLongf bound = compressBound(static_cast<uLong>(raw.size()));
    std::vector<unsigned char> z(bound);
    if (compress2(z.data(), &bound, raw.data(), static_cast<uLong>(raw.size()), 6) != Z_OK)
        throw IoError("png deflate failed: " + path);
    z.resize(bound);
    detail::png_chunk(f, "IDAT", z);
    detail::png_chunk(f, "IEND", {});
    if (!f) throw IoError("write failed: " + path);
}

// Binary PGM (P5), 8-bit.
inline void write_pgm(const std::string& path, const Image& img, double lo = 0.0,
                      double hi = 1.0) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for writing: " + path);
    f << "P5\n" << img.width << " " << img.height << "\n255\n";
    const auto raw = detail::quantize_rows(img, lo, hi, 8, true);
    for (int r = 0; r < img.height; ++r)
        f.write(reinterpret_cast<const char*>(raw.data() +
                                              static_cast<size_t>(r) * (1 + img.width) + 1),
                img.width);
    if (!f) throw IoError("write failed: " + path);
}

// Horizontal montage with a light separator, for side-by-side panels.
inline Image montage_row(const std::vector<Image>& panels, int gap = 2, double gap_value = 1.0) {
    if (panels.empty()) throw std::invalid_argument("montage_row: no panels");
    const int h = panels.front().height;
    int w = 0;
    for (const auto& p : panels) {
        if (p.height != h) throw std::invalid_argument("montage_row: panel heights differ");
        w += p.width;
    }
    w += gap * (static_cast<int>(panels.size()) - 1);
    Image out(w, h, 1.0, gap_value);
    int x0 = 0;
    for (const auto& p : panels) {
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < p.width; ++x) out.at(x0 + x, y) = p.at(x, y);
        x0 += p.width + gap;
    }
    return out;
}

} // namespace ctkit
