#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

#include "ctkit/errors.hpp"
#include "ctkit/image.hpp"

namespace ctkit {

// One recorded solver iteration. Metrics are NaN when no ground truth was
// supplied.
struct TraceRecord {
    int t = 0;
    double psnr = 0.0;
    double ssim = 0.0;
    double fidelity = 0.0;
    double lagrangian = 0.0;
};

struct RunTrace {
    std::vector<TraceRecord> records;
    int best_index = -1;   // argmax PSNR over records; -1 without ground truth

    const TraceRecord& final_record() const {
        if (records.empty()) throw std::logic_error("RunTrace: empty");
        return records.back();
    }
    const TraceRecord& best_record() const {
        if (best_index < 0) return final_record();
        return records[best_index];
    }
};

inline void write_trace_csv(const std::string& path, const RunTrace& trace) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open for writing: " + path);
    f << "t,psnr,ssim,fidelity,lagrangian\n";
    char line[256];
    for (const auto& r : trace.records) {
        std::snprintf(line, sizeof(line), "%d,%.17g,%.17g,%.17g,%.17g\n", r.t, r.psnr,
                      r.ssim, r.fidelity, r.lagrangian);
        f << line;
    }
    if (!f) throw IoError("write failed: " + path);
}

inline std::vector<TraceRecord> read_trace_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open for reading: " + path);
    std::string line;
    if (!std::getline(f, line) || line != "t,psnr,ssim,fidelity,lagrangian")
        throw IoError("malformed trace header: " + path);
    std::vector<TraceRecord> out;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        TraceRecord r;
        char* p = line.data();
        char* end = nullptr;
        r.t = static_cast<int>(std::strtol(p, &end, 10));
        double* fields[4] = {&r.psnr, &r.ssim, &r.fidelity, &r.lagrangian};
        for (double* fld : fields) {
            if (*end != ',') throw IoError("malformed trace row: " + path);
            p = end + 1;
            *fld = std::strtod(p, &end);
        }
        out.push_back(r);
    }
    return out;
}

} // namespace ctkit
