#ifndef FLOC_SYNTH_HPP
#define FLOC_SYNTH_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "floc/filter.hpp"
#include "floc/floorplan.hpp"

namespace floc::synth {

struct InvalidSpec : ValidationError {
    using ValidationError::ValidationError;
};

// Axis-aligned rectangle in meters.
struct RectM {
    double x = 0.0;
    double y = 0.0;
    double w = 0.0;
    double h = 0.0;
};

// Rectangular-room scene: rooms and corridors are free rectangles carved
// out of solid wall, doors are free rectangles punched through walls.
struct SceneSpec {
    double resolution = 0.1;
    double width = 0.0;   // overall extent, meters; 0 = fit to contents
    double height = 0.0;
    std::vector<RectM> rooms;
    std::vector<RectM> corridors;
    std::vector<RectM> doors;
    bool require_connected = true;
};

// Deterministic grid from the spec; throws InvalidSpec if any room has a
// zero free interior or (when required) the free space is disconnected.
FloorplanGrid synth_floorplan(const SceneSpec& spec);

// JSON scene file: {resolution, width, height, rooms: [{x,y,w,h}], ...}.
SceneSpec load_scene_spec(const std::string& path);

// Bordered grid with seeded random rectangular clutter. The clutter makes
// the free-space geometry effectively unique, which is what the oracle
// localization scenarios need.
FloorplanGrid random_cluttered_floorplan(int rows, int cols, double resolution,
                                         std::uint64_t seed, int n_obstacles = 12);

// The repeated-room benchmark scene: two translation-identical rooms over
// a shared corridor, each opening into it through an identically placed
// door. Inside a room the two copies are indistinguishable; the corridor
// geometry is unique.
struct TwoRoomScene {
    FloorplanGrid grid;
    RectM room_a;  // meters; true room in the benchmark trajectory
    RectM room_b;
    RectM corridor;
    double room_pitch;  // x offset mapping room A onto room B
};
TwoRoomScene two_room_scene(double resolution = 0.1);

// Straight-line trajectory sampling: poses plus the body-frame motion
// steps between them and GT scans at every pose.
struct SynthDataset {
    std::vector<Pose> poses;
    std::vector<DepthRayScan> scans;
    std::vector<MotionStep> motions;
};
SynthDataset synth_trajectory(const FloorplanGrid& grid, const std::vector<Pose>& waypoints,
                              int rays, double fov, double max_range, double noise_sigma,
                              std::uint64_t seed);

}  // namespace floc::synth

#endif
