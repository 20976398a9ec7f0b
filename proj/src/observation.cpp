#include "floc/observation.hpp"

#include <cmath>
#include <fstream>
#include <thread>

#include <json.hpp>

namespace floc {

namespace {

// Scores one spatial cell across all orientation bins. Writes raw kernel
// values; normalization happens once at the end.
void score_cell(const FloorplanGrid& grid, const DepthRayScan& scan,
                const LikelihoodParams& params, ProbMap& map, int row, int col) {
    const auto& s = map.spec();
    const double x = map.cell_x(col);
    const double y = map.cell_y(row);
    if (!grid.world_free(x, y)) return;  // occupied or outside: stays 0

    const int l = params.rays;
    const double inv_scale = 1.0 / (params.sigma * l);
    for (int k = 0; k < s.o_bins; ++k) {
        Pose pose(x, y, map.bin_theta(k));
        double l1 = 0.0;
        for (int i = 0; i < l; ++i) {
            double offset = (l > 1) ? -params.fov / 2.0 + i * params.fov / (l - 1) : 0.0;
            double d = cast_ray(grid, pose, pose.theta + offset, params.max_range);
            l1 += std::abs(scan.depths[i] - d);
        }
        map.at(row, col, k) = std::exp(-l1 * inv_scale);
    }
}

}  // namespace

ProbMap likelihood_map(const FloorplanGrid& grid, const DepthRayScan& scan,
                       const PoseGridSpec& spec, const LikelihoodParams& params,
                       int threads) {
    if (static_cast<int>(scan.size()) != params.rays)
        throw LengthMismatch("likelihood_map: scan has " + std::to_string(scan.size()) +
                             " rays, params expect " + std::to_string(params.rays));
    if (!(params.sigma > 0.0)) throw ValidationError("likelihood_map: sigma must be positive");

    ProbMap map(spec);
    if (threads <= 1) {
        for (int r = 0; r < spec.h_cells; ++r)
            for (int c = 0; c < spec.w_cells; ++c) score_cell(grid, scan, params, map, r, c);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back([&, t]() {
                for (int r = t; r < spec.h_cells; r += threads)
                    for (int c = 0; c < spec.w_cells; ++c) score_cell(grid, scan, params, map, r, c);
            });
        }
        for (auto& th : pool) th.join();
    }
    return normalize(map);
}

ProbMap fuse_maps(const ProbMap& single_map, const ProbMap& multi_map, FusionWeight w,
                  int factor) {
    if (!(w.omega >= 0.0 && w.omega <= 1.0))
        throw ValidationError("fuse_maps: omega must be in [0, 1]");
    ProbMap up = upsample(single_map, factor);
    if (up.spec().h_cells != multi_map.spec().h_cells ||
        up.spec().w_cells != multi_map.spec().w_cells ||
        up.spec().o_bins != multi_map.spec().o_bins)
        throw DimensionMismatch("fuse_maps: upsampled single map does not match multi map");

    ProbMap out(up.spec());
    for (std::size_t i = 0; i < out.size(); ++i)
        out.values()[i] = w.omega * up.values()[i] + (1.0 - w.omega) * multi_map.values()[i];
    return normalize(out);
}

FlocLoss floc_loss(const DepthRayScan& pred, const DepthRayScan& gt, double epsilon) {
    if (pred.size() != gt.size())
        throw LengthMismatch("floc_loss: ray counts differ (" + std::to_string(pred.size()) +
                             " vs " + std::to_string(gt.size()) + ")");
    if (!(epsilon > 0.0)) throw ValidationError("floc_loss: epsilon must be positive");

    const std::size_t l = pred.size();
    double l1 = 0.0, dot = 0.0, np2 = 0.0, ng2 = 0.0;
    for (std::size_t i = 0; i < l; ++i) {
        l1 += std::abs(pred.depths[i] - gt.depths[i]);
        dot += pred.depths[i] * gt.depths[i];
        np2 += pred.depths[i] * pred.depths[i];
        ng2 += gt.depths[i] * gt.depths[i];
    }
    const double np = std::sqrt(np2);
    const double ng = std::sqrt(ng2);
    const double denom = std::max(np * ng, epsilon);
    const double cosine = dot / denom;

    FlocLoss out;
    out.loss = l1 + (1.0 - cosine);
    out.grad.resize(l);
    const bool clamped = np * ng <= epsilon;
    for (std::size_t i = 0; i < l; ++i) {
        double diff = pred.depths[i] - gt.depths[i];
        double g = (diff > 0.0) ? 1.0 : (diff < 0.0 ? -1.0 : 0.0);
        if (clamped)
            g -= gt.depths[i] / epsilon;
        else
            g -= gt.depths[i] / denom - dot * pred.depths[i] / (np2 * denom);
        out.grad[i] = g;
    }
    return out;
}

// --- Scan file I/O ------------------------------------------------------

std::vector<DepthRayScan> load_scans(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scan file: " + path);
    std::vector<DepthRayScan> scans;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
        DepthRayScan scan;
        scan.fov = j.at("fov_deg").get<double>() * kPi / 180.0;
        scan.max_range = j.at("max_range_m").get<double>();
        scan.depths = j.at("depths").get<std::vector<double>>();
        if (j.at("l").get<std::size_t>() != scan.depths.size())
            throw ParseError(path + ":" + std::to_string(lineno) +
                             ": 'l' does not match depths length");
        scans.push_back(std::move(scan));
    }
    return scans;
}

void save_scans(const std::vector<DepthRayScan>& scans, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write scan file: " + path);
    for (std::size_t i = 0; i < scans.size(); ++i) {
        nlohmann::json j;
        j["frame_id"] = i;
        j["l"] = scans[i].size();
        j["fov_deg"] = scans[i].fov * 180.0 / kPi;
        j["max_range_m"] = scans[i].max_range;
        j["depths"] = scans[i].depths;
        out << j.dump() << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace floc
