#include "floc/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include <json.hpp>

namespace floc::synth {

namespace {

bool center_inside(const RectM& r, double cx, double cy) {
    return cx > r.x && cx < r.x + r.w && cy > r.y && cy < r.y + r.h;
}

// Flood fill over free cells, 4-connected. Returns number of reached cells.
std::size_t flood_from(const FloorplanGrid& grid, int r0, int c0) {
    std::vector<char> seen(static_cast<std::size_t>(grid.rows()) * grid.cols(), 0);
    std::vector<std::pair<int, int>> stack{{r0, c0}};
    seen[static_cast<std::size_t>(r0) * grid.cols() + c0] = 1;
    std::size_t reached = 0;
    while (!stack.empty()) {
        auto [r, c] = stack.back();
        stack.pop_back();
        ++reached;
        const int dr[] = {1, -1, 0, 0};
        const int dc[] = {0, 0, 1, -1};
        for (int i = 0; i < 4; ++i) {
            int nr = r + dr[i], nc = c + dc[i];
            if (!grid.in_bounds(nr, nc) || grid.occupied(nr, nc)) continue;
            auto idx = static_cast<std::size_t>(nr) * grid.cols() + nc;
            if (seen[idx]) continue;
            seen[idx] = 1;
            stack.push_back({nr, nc});
        }
    }
    return reached;
}

bool free_space_connected(const FloorplanGrid& grid) {
    std::size_t total_free = 0;
    int r0 = -1, c0 = -1;
    for (int r = 0; r < grid.rows(); ++r)
        for (int c = 0; c < grid.cols(); ++c)
            if (!grid.occupied(r, c)) {
                ++total_free;
                if (r0 < 0) {
                    r0 = r;
                    c0 = c;
                }
            }
    if (total_free == 0) return false;
    return flood_from(grid, r0, c0) == total_free;
}

}  // namespace

FloorplanGrid synth_floorplan(const SceneSpec& spec) {
    if (!(spec.resolution > 0.0)) throw InvalidSpec("resolution must be positive");
    if (spec.rooms.empty() && spec.corridors.empty())
        throw InvalidSpec("scene has no free rectangles");

    double width = spec.width, height = spec.height;
    if (width <= 0.0 || height <= 0.0) {
        for (const auto* list : {&spec.rooms, &spec.corridors, &spec.doors})
            for (const auto& r : *list) {
                width = std::max(width, r.x + r.w + spec.resolution);
                height = std::max(height, r.y + r.h + spec.resolution);
            }
    }
    const int cols = static_cast<int>(std::lround(width / spec.resolution));
    const int rows = static_cast<int>(std::lround(height / spec.resolution));
    if (rows < 1 || cols < 1) throw InvalidSpec("scene extent smaller than one cell");

    FloorplanGrid grid(rows, cols, spec.resolution);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) grid.set_occupied(r, c, true);

    auto carve = [&](const RectM& rect) {
        std::size_t carved = 0;
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c)
                if (center_inside(rect, grid.cell_center_x(c), grid.cell_center_y(r))) {
                    grid.set_occupied(r, c, false);
                    ++carved;
                }
        return carved;
    };

    for (const auto& room : spec.rooms)
        if (carve(room) == 0) throw InvalidSpec("room has zero free interior");
    for (const auto& corridor : spec.corridors)
        if (carve(corridor) == 0) throw InvalidSpec("corridor has zero free interior");
    for (const auto& door : spec.doors) carve(door);

    if (spec.require_connected && !free_space_connected(grid))
        throw InvalidSpec("free space is not a single connected component");
    return grid;
}

SceneSpec load_scene_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scene spec: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
    SceneSpec spec;
    spec.resolution = j.value("resolution", 0.1);
    spec.width = j.value("width", 0.0);
    spec.height = j.value("height", 0.0);
    spec.require_connected = j.value("require_connected", true);
    auto read_rects = [&](const char* key, std::vector<RectM>& out) {
        if (!j.contains(key)) return;
        for (const auto& r : j.at(key))
            out.push_back({r.at("x").get<double>(), r.at("y").get<double>(),
                           r.at("w").get<double>(), r.at("h").get<double>()});
    };
    read_rects("rooms", spec.rooms);
    read_rects("corridors", spec.corridors);
    read_rects("doors", spec.doors);
    return spec;
}

FloorplanGrid random_cluttered_floorplan(int rows, int cols, double resolution,
                                         std::uint64_t seed, int n_obstacles) {
    FloorplanGrid grid(rows, cols, resolution);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            grid.set_occupied(r, c, r == 0 || r == rows - 1 || c == 0 || c == cols - 1);

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> row_dist(2, rows - 4);
    std::uniform_int_distribution<int> col_dist(2, cols - 4);
    std::uniform_int_distribution<int> size_dist(1, 3);

    for (int i = 0; i < n_obstacles; ++i) {
        int r0 = row_dist(rng), c0 = col_dist(rng);
        int h = size_dist(rng), w = size_dist(rng);
        FloorplanGrid trial = grid;
        for (int r = r0; r < std::min(r0 + h, rows - 1); ++r)
            for (int c = c0; c < std::min(c0 + w, cols - 1); ++c)
                trial.set_occupied(r, c, true);
        // Keep the obstacle only if it does not disconnect the free space.
        if (free_space_connected(trial)) grid = std::move(trial);
    }
    return grid;
}

TwoRoomScene two_room_scene(double resolution) {
    TwoRoomScene scene{FloorplanGrid(1, 1, 1.0), {}, {}, {}, 0.0};
    scene.room_pitch = 3.4;
    scene.room_a = {0.2, 1.4, 3.0, 3.0};
    scene.room_b = {0.2 + scene.room_pitch, 1.4, 3.0, 3.0};
    scene.corridor = {0.2, 0.2, 6.4, 0.8};

    SceneSpec spec;
    spec.resolution = resolution;
    spec.width = 6.8;
    spec.height = 4.6;
    spec.rooms = {scene.room_a, scene.room_b};
    spec.corridors = {scene.corridor};
    // Identically placed doors, one per room, through the corridor wall.
    spec.doors = {{1.2, 0.9, 0.6, 0.6}, {1.2 + scene.room_pitch, 0.9, 0.6, 0.6}};
    scene.grid = synth_floorplan(spec);
    return scene;
}

SynthDataset synth_trajectory(const FloorplanGrid& grid, const std::vector<Pose>& waypoints,
                              int rays, double fov, double max_range, double noise_sigma,
                              std::uint64_t seed) {
    if (waypoints.empty()) throw ValidationError("synth_trajectory: need at least one pose");

    SynthDataset out;
    out.poses = waypoints;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, noise_sigma);

    for (const auto& pose : waypoints) {
        DepthRayScan scan = gt_scan(grid, pose, rays, fov, max_range);
        if (noise_sigma > 0.0)
            for (double& d : scan.depths)
                d = std::clamp(d + noise(rng), 0.0, max_range);
        out.scans.push_back(std::move(scan));
    }
    for (std::size_t i = 0; i + 1 < waypoints.size(); ++i) {
        const Pose& a = waypoints[i];
        const Pose& b = waypoints[i + 1];
        double dxw = b.x - a.x, dyw = b.y - a.y;
        MotionStep m;
        m.dx = std::cos(a.theta) * dxw + std::sin(a.theta) * dyw;
        m.dy = -std::sin(a.theta) * dxw + std::cos(a.theta) * dyw;
        double dt = b.theta - a.theta;
        while (dt > kPi) dt -= kTwoPi;
        while (dt < -kPi) dt += kTwoPi;
        m.dtheta = dt;
        out.motions.push_back(m);
    }
    return out;
}

}  // namespace floc::synth
