#pragma once

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>

#include "ctkit/errors.hpp"
#include "ctkit/image.hpp"

namespace ctkit {

// Portable grid format: one text header line
//   P-GRID <width> <height> <extent>\n
// followed by width*height row-major little-endian f64 values. Round-trips
// are bit-exact for finite values.
static_assert(std::endian::native == std::endian::little,
              "grid format assumes a little-endian host");

namespace detail {

inline void write_grid_raw(const std::string& path, int width, int height, double extent,
                           const std::vector<double>& values) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for writing: " + path);
    char header[96];
    std::snprintf(header, sizeof(header), "P-GRID %d %d %.17g\n", width, height, extent);
    f << header;
    f.write(reinterpret_cast<const char*>(values.data()),
            static_cast<std::streamsize>(values.size() * sizeof(double)));
    if (!f) throw IoError("write failed: " + path);
}

struct RawGrid {
    int width = 0, height = 0;
    double extent = 0.0;
    std::vector<double> values;
};

inline RawGrid read_grid_raw(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for reading: " + path);
    std::string line;
    if (!std::getline(f, line)) throw IoError("truncated grid header: " + path);
    RawGrid g;
    char tag[16] = {0};
    if (std::sscanf(line.c_str(), "%15s %d %d %lf", tag, &g.width, &g.height, &g.extent) != 4 ||
        std::string(tag) != "P-GRID")
        throw IoError("malformed grid header: " + path);
    if (g.width < 1 || g.height < 1)
        throw IoError("grid header has non-positive dims: " + path);
    g.values.resize(static_cast<size_t>(g.width) * g.height);
    f.read(reinterpret_cast<char*>(g.values.data()),
           static_cast<std::streamsize>(g.values.size() * sizeof(double)));
    if (f.gcount() != static_cast<std::streamsize>(g.values.size() * sizeof(double)))
        throw IoError("truncated grid payload: " + path);
    return g;
}

} // namespace detail

inline void write_grid(const std::string& path, const Image& img) {
    detail::write_grid_raw(path, img.width, img.height, img.physical_extent, img.values);
}

// Sinograms store detectors along the row axis; extent records the detector
// span for inspection.
inline void write_grid(const std::string& path, const Sinogram& sino,
                       double detector_span = 0.0) {
    detail::write_grid_raw(path, sino.num_detectors, sino.num_angles, detector_span,
                           sino.values);
}

inline Image read_grid_image(const std::string& path) {
    auto g = detail::read_grid_raw(path);
    Image img(g.width, g.height, g.extent > 0.0 ? g.extent : 1.0);
    img.values = std::move(g.values);
    return img;
}

inline Sinogram read_grid_sinogram(const std::string& path) {
    auto g = detail::read_grid_raw(path);
    Sinogram s(g.height, g.width);
    s.values = std::move(g.values);
    return s;
}

} // namespace ctkit
