#include "floc/filter.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

namespace floc {

namespace {

// Truncated Gaussian taps for a separable blur, normalized to sum 1.
// sigma is in cell (or bin) units.
std::vector<double> gaussian_taps(double sigma) {
    if (sigma <= 0.0) return {1.0};
    int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> taps(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        taps[i + radius] = std::exp(-0.5 * (i * i) / (sigma * sigma));
        sum += taps[i + radius];
    }
    for (double& t : taps) t /= sum;
    return taps;
}

}  // namespace

ProbMap uniform_free_prior(const FloorplanGrid& grid, const PoseGridSpec& spec) {
    ProbMap map(spec);
    for (int r = 0; r < spec.h_cells; ++r)
        for (int c = 0; c < spec.w_cells; ++c) {
            if (!grid.world_free(map.cell_x(c), map.cell_y(r))) continue;
            for (int k = 0; k < spec.o_bins; ++k) map.at(r, c, k) = 1.0;
        }
    return normalize(map);
}

TrackState predict(const TrackState& state, const MotionStep& motion,
                   const FloorplanGrid& grid) {
    if (motion.sigma_trans < 0.0 || motion.sigma_rot < 0.0)
        throw ValidationError("predict: noise sigmas must be >= 0");

    const auto& spec = state.posterior.spec();
    const int H = spec.h_cells, W = spec.w_cells, O = spec.o_bins;
    const double cell = spec.cell_size;

    // Orientation shift, shared by all bins.
    const double bin_width = kTwoPi / O;
    const double shift_bins = motion.dtheta / bin_width;
    const int b0 = static_cast<int>(std::floor(shift_bins));
    const double fb = shift_bins - b0;

    ProbMap shifted(spec);
    double blocked = 0.0;

    for (int k = 0; k < O; ++k) {
        const double heading = kTwoPi * k / O;
        const double wx = motion.dx * std::cos(heading) - motion.dy * std::sin(heading);
        const double wy = motion.dx * std::sin(heading) + motion.dy * std::cos(heading);
        const double sx = wx / cell, sy = wy / cell;
        const int c0 = static_cast<int>(std::floor(sx));
        const int r0 = static_cast<int>(std::floor(sy));
        const double fc = sx - c0, fr = sy - r0;

        const int kb0 = ((k + b0) % O + O) % O;
        const int kb1 = (kb0 + 1) % O;

        for (int r = 0; r < H; ++r)
            for (int c = 0; c < W; ++c) {
                const double m = state.posterior.at(r, c, k);
                if (m == 0.0) continue;
                for (int dr = 0; dr <= 1; ++dr)
                    for (int dc = 0; dc <= 1; ++dc) {
                        const double wcell = (dr ? fr : 1.0 - fr) * (dc ? fc : 1.0 - fc);
                        if (wcell == 0.0) continue;
                        const int tr = r + r0 + dr, tc = c + c0 + dc;
                        if (tr < 0 || tr >= H || tc < 0 || tc >= W) {
                            blocked += m * wcell;
                            continue;
                        }
                        if (fb > 0.0) {
                            shifted.at(tr, tc, kb0) += m * wcell * (1.0 - fb);
                            shifted.at(tr, tc, kb1) += m * wcell * fb;
                        } else {
                            shifted.at(tr, tc, kb0) += m * wcell;
                        }
                    }
            }
    }

    // Separable spatial blur; mass clipped at the map edge joins the
    // blocked pool so the total is conserved.
    ProbMap blurred = std::move(shifted);
    const auto taps = gaussian_taps(motion.sigma_trans / cell);
    if (taps.size() > 1) {
        const int radius = static_cast<int>(taps.size()) / 2;
        for (int axis = 0; axis < 2; ++axis) {
            ProbMap next(spec);
            for (int r = 0; r < H; ++r)
                for (int c = 0; c < W; ++c)
                    for (int k = 0; k < O; ++k) {
                        const double m = blurred.at(r, c, k);
                        if (m == 0.0) continue;
                        for (int i = -radius; i <= radius; ++i) {
                            const int tr = axis == 0 ? r + i : r;
                            const int tc = axis == 0 ? c : c + i;
                            const double w = m * taps[i + radius];
                            if (tr < 0 || tr >= H || tc < 0 || tc >= W)
                                blocked += w;
                            else
                                next.at(tr, tc, k) += w;
                        }
                    }
            blurred = std::move(next);
        }
    }

    // Circular orientation blur.
    const auto otaps = gaussian_taps(motion.sigma_rot / bin_width);
    if (otaps.size() > 1) {
        const int radius = static_cast<int>(otaps.size()) / 2;
        ProbMap next(spec);
        for (int r = 0; r < H; ++r)
            for (int c = 0; c < W; ++c)
                for (int k = 0; k < O; ++k) {
                    const double m = blurred.at(r, c, k);
                    if (m == 0.0) continue;
                    for (int i = -radius; i <= radius; ++i) {
                        const int tk = ((k + i) % O + O) % O;
                        next.at(r, c, tk) += m * otaps[i + radius];
                    }
                }
        blurred = std::move(next);
    }

    // Mass on occupied cells joins the blocked pool, then everything
    // blocked is given back proportionally to the free-cell mass.
    double free_mass = 0.0;
    std::vector<char> free_cell(static_cast<std::size_t>(H) * W);
    for (int r = 0; r < H; ++r)
        for (int c = 0; c < W; ++c) {
            bool free = grid.world_free(blurred.cell_x(c), blurred.cell_y(r));
            free_cell[static_cast<std::size_t>(r) * W + c] = free;
            for (int k = 0; k < O; ++k) {
                if (free) {
                    free_mass += blurred.at(r, c, k);
                } else {
                    blocked += blurred.at(r, c, k);
                    blurred.at(r, c, k) = 0.0;
                }
            }
        }

    if (blocked > 0.0) {
        if (free_mass > 0.0) {
            const double scale = 1.0 + blocked / free_mass;
            for (double& v : blurred.values()) v *= scale;
        } else {
            // Everything got pushed into walls; fall back to uniform over free.
            std::size_t n_free = 0;
            for (char f : free_cell) n_free += f ? O : 0;
            if (n_free == 0) throw AllZero("predict: floorplan has no free cells");
            const double share = blocked / n_free;
            for (int r = 0; r < H; ++r)
                for (int c = 0; c < W; ++c)
                    if (free_cell[static_cast<std::size_t>(r) * W + c])
                        for (int k = 0; k < O; ++k) blurred.at(r, c, k) = share;
        }
    }

    TrackState out{normalize(blurred), state.step_index, state.floor_prob};
    return out;
}

TrackState update(const TrackState& state, const ProbMap& likelihood) {
    if (state.posterior.spec() != likelihood.spec())
        throw DimensionMismatch("update: posterior and likelihood grids differ");

    const double floor_value = state.floor_prob / static_cast<double>(state.posterior.size());
    ProbMap product(state.posterior.spec());
    for (std::size_t i = 0; i < product.size(); ++i) {
        double prior = std::max(state.posterior.values()[i], floor_value);
        product.values()[i] = prior * likelihood.values()[i];
    }
    TrackState out{normalize(product), state.step_index + 1, state.floor_prob};
    return out;
}

std::vector<TrackStep> track(const FloorplanGrid& grid,
                             const std::vector<DepthRayScan>& scans,
                             const std::vector<MotionStep>& motions,
                             const TrackParams& params) {
    if (scans.empty()) throw ValidationError("track: need at least one scan");
    if (motions.size() != scans.size() - 1)
        throw ValidationError("track: expected " + std::to_string(scans.size() - 1) +
                              " motions for " + std::to_string(scans.size()) + " scans, got " +
                              std::to_string(motions.size()));

    TrackState state{uniform_free_prior(grid, params.spec), 0, params.floor_prob};
    std::vector<TrackStep> steps;
    steps.reserve(scans.size());
    for (std::size_t t = 0; t < scans.size(); ++t) {
        try {
            ProbMap lik =
                likelihood_map(grid, scans[t], params.spec, params.likelihood, params.threads);
            state = update(state, lik);
            steps.push_back({argmax_pose(state.posterior), state.posterior});
            if (t + 1 < scans.size()) state = predict(state, motions[t], grid);
        } catch (const Error& e) {
            throw Error("track step " + std::to_string(t) + ": " + e.what());
        }
    }
    return steps;
}

// --- Motion file I/O ----------------------------------------------------

std::vector<MotionStep> load_motions(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open motion file: " + path);
    std::vector<MotionStep> motions;
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
        MotionStep m;
        m.dx = j.at("dx_m").get<double>();
        m.dy = j.at("dy_m").get<double>();
        m.dtheta = j.at("dtheta_rad").get<double>();
        motions.push_back(m);
    }
    return motions;
}

void save_motions(const std::vector<MotionStep>& motions, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write motion file: " + path);
    for (std::size_t i = 0; i < motions.size(); ++i) {
        nlohmann::json j;
        j["step"] = i;
        j["dx_m"] = motions[i].dx;
        j["dy_m"] = motions[i].dy;
        j["dtheta_rad"] = motions[i].dtheta;
        out << j.dump() << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace floc
