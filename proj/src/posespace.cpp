#include "floc/posespace.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

namespace floc {

ProbMap::ProbMap(const PoseGridSpec& spec, double fill)
    : spec_(spec),
      values_(static_cast<std::size_t>(spec.h_cells) * spec.w_cells * spec.o_bins, fill) {
    if (spec.h_cells < 1 || spec.w_cells < 1 || spec.o_bins < 1)
        throw ValidationError("pose grid dimensions must be >= 1");
    if (!(spec.cell_size > 0.0)) throw ValidationError("pose grid cell_size must be positive");
}

Pose argmax_pose(const ProbMap& map) {
    const auto& v = map.values();
    std::size_t best = 0;
    double best_val = v[0];
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (v[i] > best_val) {
            best_val = v[i];
            best = i;
        }
    }
    if (best_val <= 0.0) throw AllZero("argmax_pose: map has no positive entry");

    const auto& s = map.spec();
    int bin = static_cast<int>(best % s.o_bins);
    std::size_t cell = best / s.o_bins;
    int col = static_cast<int>(cell % s.w_cells);
    int row = static_cast<int>(cell / s.w_cells);
    return Pose(map.cell_x(col), map.cell_y(row), map.bin_theta(bin));
}

ProbMap normalize(const ProbMap& map) {
    double sum = 0.0;
    for (double v : map.values()) sum += v;
    if (!(sum > 0.0)) throw AllZero("normalize: map sums to zero");

    ProbMap out(map.spec());
    const double inv = 1.0 / sum;
    for (std::size_t i = 0; i < map.size(); ++i) out.values()[i] = map.values()[i] * inv;
    out.set_normalized(true);
    return out;
}

ProbMap upsample(const ProbMap& map, int factor) {
    if (factor < 1) throw ValidationError("upsample: factor must be >= 1");
    const auto& s = map.spec();
    PoseGridSpec fine = s;
    fine.h_cells = s.h_cells * factor;
    fine.w_cells = s.w_cells * factor;
    fine.cell_size = s.cell_size / factor;

    ProbMap out(fine);
    for (int r = 0; r < fine.h_cells; ++r)
        for (int c = 0; c < fine.w_cells; ++c)
            for (int k = 0; k < s.o_bins; ++k)
                out.at(r, c, k) = map.at(r / factor, c / factor, k);
    if (map.normalized()) out = normalize(out);
    return out;
}

// --- Serialization ------------------------------------------------------

static_assert(std::endian::native == std::endian::little,
              "PROBMAP payload is little-endian; big-endian hosts need byte swaps");

void save_probmap(const ProbMap& map, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write probmap: " + path);
    const auto& s = map.spec();
    out.precision(17);
    out << "PROBMAP v1 " << s.h_cells << ' ' << s.w_cells << ' ' << s.o_bins << ' '
        << s.cell_size << ' ' << s.origin_x << ' ' << s.origin_y << '\n';
    out.write(reinterpret_cast<const char*>(map.values().data()),
              static_cast<std::streamsize>(map.size() * sizeof(double)));
    if (!out) throw IoError("write failed: " + path);
}

ProbMap load_probmap(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open probmap: " + path);
    std::string magic, version;
    PoseGridSpec s;
    if (!(in >> magic >> version >> s.h_cells >> s.w_cells >> s.o_bins >> s.cell_size >>
          s.origin_x >> s.origin_y) ||
        magic != "PROBMAP" || version != "v1")
        throw ParseError(path + ":1: malformed PROBMAP v1 header");
    in.get();  // newline terminating the header

    ProbMap map(s);
    in.read(reinterpret_cast<char*>(map.values().data()),
            static_cast<std::streamsize>(map.size() * sizeof(double)));
    if (in.gcount() != static_cast<std::streamsize>(map.size() * sizeof(double)))
        throw ParseError(path + ": truncated payload");

    double sum = 0.0;
    for (double v : map.values()) {
        if (!(v >= 0.0) || !std::isfinite(v))
            throw ParseError(path + ": negative or non-finite entry");
        sum += v;
    }
    map.set_normalized(std::abs(sum - 1.0) <= 1e-9);
    return map;
}

void save_heatmap(const ProbMap& map, const std::string& path) {
    const auto& s = map.spec();
    std::vector<double> proj(static_cast<std::size_t>(s.h_cells) * s.w_cells, 0.0);
    double peak = 0.0;
    for (int r = 0; r < s.h_cells; ++r)
        for (int c = 0; c < s.w_cells; ++c) {
            double m = 0.0;
            for (int k = 0; k < s.o_bins; ++k) m = std::max(m, map.at(r, c, k));
            proj[static_cast<std::size_t>(r) * s.w_cells + c] = m;
            peak = std::max(peak, m);
        }

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write heatmap: " + path);
    out << "P5\n" << s.w_cells << ' ' << s.h_cells << "\n255\n";
    for (double v : proj) {
        int g = peak > 0.0 ? static_cast<int>(std::lround(255.0 * v / peak)) : 0;
        out.put(static_cast<char>(std::clamp(g, 0, 255)));
    }
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace floc
