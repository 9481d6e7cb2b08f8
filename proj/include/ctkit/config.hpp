#pragma once

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ctkit/errors.hpp"
#include "ctkit/fidelity.hpp"
#include "ctkit/geometry.hpp"
#include "ctkit/noise.hpp"
#include "ctkit/solver.hpp"

namespace ctkit {

enum class GeometryKind { parallel, fan };
enum class Method { fbp, cgne, dip, pnp_dip, mcdip_admm };

struct PhantomConfig {
    std::string kind = "shepp-logan";
    int size = 64;
    double extent = 1.0;
    bool operator==(const PhantomConfig&) const = default;
};

struct GeometryConfig {
    GeometryKind kind = GeometryKind::parallel;
    int num_angles = 100;
    int num_detectors = 0;            // 0: image diagonal in pixels
    double detector_spacing = 0.0;    // 0: pixel size
    double source_distance = 1.0;     // fan
    double detector_distance = 1.0;   // fan
    double detector_pixel_spacing = 0.0;   // 0: 2*extent/num_detectors
    bool operator==(const GeometryConfig&) const = default;
};

struct NoiseConfig {
    NoiseKind kind = NoiseKind::gaussian;
    double sigma = 0.03;
    uint64_t seed = 1;
    double target_mean_counts = 1000.0;   // Poisson photon scaling
    bool operator==(const NoiseConfig&) const = default;
};

struct SolveConfig {
    Method method = Method::mcdip_admm;
    double rho = 1.0;
    double lambda = 4.0;
    int num_codes = 20;
    int iterations = 5000;
    double base_lr = 0.02;
    int lr_halving_period = 1000;
    FidelityKind fidelity = FidelityKind::l2;
    int trace_every = 25;
    std::vector<uint64_t> seeds = {1, 2, 3};
    int cgne_iterations = 50;
    std::string fbp_filter = "ramp";
    bool operator==(const SolveConfig&) const = default;
};

struct ExperimentConfig {
    PhantomConfig phantom;
    GeometryConfig geometry;
    NoiseConfig noise;
    SolveConfig solver;
    std::string output_dir = "out";
    bool operator==(const ExperimentConfig&) const = default;

    void validate() const {
        if (phantom.size < 16) throw ConfigError("phantom.size must be >= 16");
        if (!(phantom.extent > 0.0)) throw ConfigError("phantom.extent must be > 0");
        if (geometry.num_angles < 1) throw ConfigError("geometry.num_angles must be >= 1");
        if (noise.kind == NoiseKind::gaussian && !(noise.sigma > 0.0))
            throw ConfigError("noise.sigma must be > 0 for gaussian noise");
        if (noise.kind == NoiseKind::poisson && !(noise.target_mean_counts > 0.0))
            throw ConfigError("noise.target_mean_counts must be > 0");
        // The fidelity must match the simulated measurement model.
        if ((solver.fidelity == FidelityKind::poisson) != (noise.kind == NoiseKind::poisson))
            throw ConfigError("solver.fidelity must match noise.kind (l2 <-> gaussian, "
                              "poisson <-> poisson)");
        if (solver.rho <= 0.0) throw ConfigError("solver.rho must be > 0");
        if (solver.lambda < 0.0) throw ConfigError("solver.lambda must be >= 0");
        if (solver.num_codes < 1) throw ConfigError("solver.num_codes must be >= 1");
        if (solver.iterations < 1) throw ConfigError("solver.iterations must be >= 1");
        if (solver.seeds.empty()) throw ConfigError("solver.seeds must not be empty");
        if (solver.fbp_filter != "ramp" && solver.fbp_filter != "hann")
            throw ConfigError("solver.fbp_filter must be ramp or hann");
    }
};

// ---- enum <-> string ----

inline std::string to_string(GeometryKind k) {
    return k == GeometryKind::parallel ? "parallel" : "fan";
}
inline std::string to_string(NoiseKind k) {
    return k == NoiseKind::gaussian ? "gaussian" : "poisson";
}
inline std::string to_string(FidelityKind k) {
    return k == FidelityKind::l2 ? "l2" : "poisson";
}
inline std::string to_string(Method m) {
    switch (m) {
        case Method::fbp: return "fbp";
        case Method::cgne: return "cgne";
        case Method::dip: return "dip";
        case Method::pnp_dip: return "pnp-dip";
        case Method::mcdip_admm: return "mcdip-admm";
    }
    return "?";
}

inline GeometryKind geometry_kind_from(const std::string& s) {
    if (s == "parallel") return GeometryKind::parallel;
    if (s == "fan") return GeometryKind::fan;
    throw ConfigError("unknown geometry kind: " + s);
}
inline NoiseKind noise_kind_from(const std::string& s) {
    if (s == "gaussian") return NoiseKind::gaussian;
    if (s == "poisson") return NoiseKind::poisson;
    throw ConfigError("unknown noise kind: " + s);
}
inline FidelityKind fidelity_kind_from(const std::string& s) {
    if (s == "l2") return FidelityKind::l2;
    if (s == "poisson") return FidelityKind::poisson;
    throw ConfigError("unknown fidelity: " + s);
}
inline Method method_from(const std::string& s) {
    if (s == "fbp") return Method::fbp;
    if (s == "cgne") return Method::cgne;
    if (s == "dip") return Method::dip;
    if (s == "pnp-dip") return Method::pnp_dip;
    if (s == "mcdip-admm") return Method::mcdip_admm;
    throw ConfigError("unknown method: " + s);
}

// ---- INI-style serialization: [section] lines with key = value ----

namespace detail {

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct IniData {
    std::map<std::string, std::map<std::string, std::string>> sections;

    const std::string* find(const std::string& sec, const std::string& key) const {
        auto s = sections.find(sec);
        if (s == sections.end()) return nullptr;
        auto k = s->second.find(key);
        return k == s->second.end() ? nullptr : &k->second;
    }
};

inline IniData parse_ini(const std::string& text) {
    IniData data;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    auto trim = [](std::string s) {
        const char* ws = " \t\r\n";
        const auto a = s.find_first_not_of(ws);
        if (a == std::string::npos) return std::string();
        const auto b = s.find_last_not_of(ws);
        return s.substr(a, b - a + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(lineno) + ": bad section");
            section = trim(line.substr(1, line.size() - 2));
            data.sections[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        data.sections[section][key] = value;
    }
    return data;
}

template <typename T>
inline void get(const IniData& ini, const std::string& sec, const std::string& key, T& out) {
    const std::string* v = ini.find(sec, key);
    if (!v) return;
    if constexpr (std::is_same_v<T, std::string>) {
        out = *v;
    } else if constexpr (std::is_same_v<T, int>) {
        out = std::stoi(*v);
    } else if constexpr (std::is_same_v<T, uint64_t>) {
        out = std::stoull(*v);
    } else if constexpr (std::is_same_v<T, double>) {
        out = std::stod(*v);
    }
}

inline void get_seeds(const IniData& ini, const std::string& sec, const std::string& key,
                      std::vector<uint64_t>& out) {
    const std::string* v = ini.find(sec, key);
    if (!v) return;
    out.clear();
    std::istringstream ss(*v);
    uint64_t s;
    while (ss >> s) out.push_back(s);
    if (out.empty()) throw ConfigError("config: '" + key + "' must list at least one seed");
}

} // namespace detail

inline ExperimentConfig parse_config(const std::string& text) {
    const auto ini = detail::parse_ini(text);
    ExperimentConfig cfg;
    std::string tmp;

    detail::get(ini, "phantom", "kind", cfg.phantom.kind);
    detail::get(ini, "phantom", "size", cfg.phantom.size);
    detail::get(ini, "phantom", "extent", cfg.phantom.extent);

    tmp.clear();
    detail::get(ini, "geometry", "kind", tmp);
    if (!tmp.empty()) cfg.geometry.kind = geometry_kind_from(tmp);
    detail::get(ini, "geometry", "num_angles", cfg.geometry.num_angles);
    detail::get(ini, "geometry", "num_detectors", cfg.geometry.num_detectors);
    detail::get(ini, "geometry", "detector_spacing", cfg.geometry.detector_spacing);
    detail::get(ini, "geometry", "source_distance", cfg.geometry.source_distance);
    detail::get(ini, "geometry", "detector_distance", cfg.geometry.detector_distance);
    detail::get(ini, "geometry", "detector_pixel_spacing", cfg.geometry.detector_pixel_spacing);

    tmp.clear();
    detail::get(ini, "noise", "kind", tmp);
    if (!tmp.empty()) cfg.noise.kind = noise_kind_from(tmp);
    detail::get(ini, "noise", "sigma", cfg.noise.sigma);
    detail::get(ini, "noise", "seed", cfg.noise.seed);
    detail::get(ini, "noise", "target_mean_counts", cfg.noise.target_mean_counts);

    tmp.clear();
    detail::get(ini, "solver", "method", tmp);
    if (!tmp.empty()) cfg.solver.method = method_from(tmp);
    detail::get(ini, "solver", "rho", cfg.solver.rho);
    detail::get(ini, "solver", "lambda", cfg.solver.lambda);
    detail::get(ini, "solver", "num_codes", cfg.solver.num_codes);
    detail::get(ini, "solver", "iterations", cfg.solver.iterations);
    detail::get(ini, "solver", "base_lr", cfg.solver.base_lr);
    detail::get(ini, "solver", "lr_halving_period", cfg.solver.lr_halving_period);
    tmp.clear();
    detail::get(ini, "solver", "fidelity", tmp);
    if (!tmp.empty()) cfg.solver.fidelity = fidelity_kind_from(tmp);
    detail::get(ini, "solver", "trace_every", cfg.solver.trace_every);
    detail::get_seeds(ini, "solver", "seeds", cfg.solver.seeds);
    detail::get(ini, "solver", "cgne_iterations", cfg.solver.cgne_iterations);
    detail::get(ini, "solver", "fbp_filter", cfg.solver.fbp_filter);

    detail::get(ini, "output", "dir", cfg.output_dir);
    return cfg;
}

inline std::string serialize_config(const ExperimentConfig& cfg) {
    std::ostringstream out;
    out << "[phantom]\n"
        << "kind = " << cfg.phantom.kind << "\n"
        << "size = " << cfg.phantom.size << "\n"
        << "extent = " << detail::fmt_double(cfg.phantom.extent) << "\n\n";
    out << "[geometry]\n"
        << "kind = " << to_string(cfg.geometry.kind) << "\n"
        << "num_angles = " << cfg.geometry.num_angles << "\n"
        << "num_detectors = " << cfg.geometry.num_detectors << "\n"
        << "detector_spacing = " << detail::fmt_double(cfg.geometry.detector_spacing) << "\n"
        << "source_distance = " << detail::fmt_double(cfg.geometry.source_distance) << "\n"
        << "detector_distance = " << detail::fmt_double(cfg.geometry.detector_distance) << "\n"
        << "detector_pixel_spacing = "
        << detail::fmt_double(cfg.geometry.detector_pixel_spacing) << "\n\n";
    out << "[noise]\n"
        << "kind = " << to_string(cfg.noise.kind) << "\n"
        << "sigma = " << detail::fmt_double(cfg.noise.sigma) << "\n"
        << "seed = " << cfg.noise.seed << "\n"
        << "target_mean_counts = " << detail::fmt_double(cfg.noise.target_mean_counts)
        << "\n\n";
    out << "[solver]\n"
        << "method = " << to_string(cfg.solver.method) << "\n"
        << "rho = " << detail::fmt_double(cfg.solver.rho) << "\n"
        << "lambda = " << detail::fmt_double(cfg.solver.lambda) << "\n"
        << "num_codes = " << cfg.solver.num_codes << "\n"
        << "iterations = " << cfg.solver.iterations << "\n"
        << "base_lr = " << detail::fmt_double(cfg.solver.base_lr) << "\n"
        << "lr_halving_period = " << cfg.solver.lr_halving_period << "\n"
        << "fidelity = " << to_string(cfg.solver.fidelity) << "\n"
        << "trace_every = " << cfg.solver.trace_every << "\n"
        << "seeds =";
    for (uint64_t s : cfg.solver.seeds) out << " " << s;
    out << "\n"
        << "cgne_iterations = " << cfg.solver.cgne_iterations << "\n"
        << "fbp_filter = " << cfg.solver.fbp_filter << "\n\n";
    out << "[output]\n"
        << "dir = " << cfg.output_dir << "\n";
    return out.str();
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open config: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

inline void save_config(const std::string& path, const ExperimentConfig& cfg) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open for writing: " + path);
    f << serialize_config(cfg);
    if (!f) throw IoError("write failed: " + path);
}

} // namespace ctkit
