#ifndef FLOC_FLOORPLAN_HPP
#define FLOC_FLOORPLAN_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "floc/common.hpp"

namespace floc {

struct OriginOccupied : ValidationError {
    using ValidationError::ValidationError;
};
struct OriginOutOfBounds : ValidationError {
    using ValidationError::ValidationError;
};

// Camera pose in the world frame: x along columns, y along rows,
// theta = 0 points +x, counter-clockwise positive.
struct Pose {
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;  // normalized to [0, 2*pi)

    Pose() = default;
    Pose(double x_, double y_, double theta_) : x(x_), y(y_), theta(wrap_angle(theta_)) {}
};

// Fixed-length vector of equiangular planar depths spanning a horizontal FOV.
// Ray k's bearing offset from the heading is -fov/2 + k*fov/(l-1).
struct DepthRayScan {
    std::vector<double> depths;
    double fov = 0.0;        // radians
    double max_range = 0.0;  // meters

    std::size_t size() const { return depths.size(); }
};

// Binary occupancy grid with metric resolution. Row-major, H rows x W cols;
// cell (0,0)'s corner sits at `origin` in world coordinates. Immutable in
// practice: all queries are const, so grids are safe to share across threads.
class FloorplanGrid {
   public:
    FloorplanGrid(int rows, int cols, double resolution, double origin_x = 0.0,
                  double origin_y = 0.0);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    double resolution() const { return resolution_; }
    double origin_x() const { return origin_x_; }
    double origin_y() const { return origin_y_; }

    bool occupied(int row, int col) const { return cells_[index(row, col)] != 0; }
    void set_occupied(int row, int col, bool v) { cells_[index(row, col)] = v ? 1 : 0; }

    bool in_bounds(int row, int col) const {
        return row >= 0 && row < rows_ && col >= 0 && col < cols_;
    }

    // Cell containing a world point; exact edge coordinates resolve to the
    // cell with the lower index (floor convention).
    int row_of(double y) const { return static_cast<int>(std::floor((y - origin_y_) / resolution_)); }
    int col_of(double x) const { return static_cast<int>(std::floor((x - origin_x_) / resolution_)); }

    double cell_center_x(int col) const { return origin_x_ + (col + 0.5) * resolution_; }
    double cell_center_y(int row) const { return origin_y_ + (row + 0.5) * resolution_; }

    bool world_free(double x, double y) const {
        int r = row_of(y), c = col_of(x);
        return in_bounds(r, c) && !occupied(r, c);
    }

    std::size_t occupied_count() const;
    const std::vector<std::uint8_t>& cells() const { return cells_; }

    bool operator==(const FloorplanGrid& other) const = default;

   private:
    std::size_t index(int row, int col) const {
        return static_cast<std::size_t>(row) * cols_ + col;
    }

    int rows_;
    int cols_;
    double resolution_;
    double origin_x_;
    double origin_y_;
    std::vector<std::uint8_t> cells_;  // 0 = free, 1 = occupied
};

// Exact DDA traversal from `origin` along `bearing` (world frame, radians).
// Returns the distance to the first face of an occupied cell, or max_range
// if no wall is hit within range (leaving the grid counts as no wall).
double cast_ray(const FloorplanGrid& grid, const Pose& origin, double bearing,
                double max_range);

// Scan of l equiangular rays spanning `fov` centered on pose.theta.
DepthRayScan gt_scan(const FloorplanGrid& grid, const Pose& pose, int l, double fov,
                     double max_range);

// --- Grid file I/O ------------------------------------------------------
//
// Text format: "FLOORPLAN v1 <H> <W> <res> <ox> <oy>" header followed by
// H rows of W characters, '.' free and '#' occupied. PGM (binary P5, 8-bit)
// is also accepted: pixel 0 = occupied, 255 = free, with resolution/origin
// from a "<path>.meta" sidecar ("<res> <ox> <oy>") or explicit arguments.

FloorplanGrid load_floorplan(const std::string& path);
FloorplanGrid load_floorplan_pgm(const std::string& path, double resolution,
                                 double origin_x, double origin_y);
void save_floorplan(const FloorplanGrid& grid, const std::string& path);
void save_floorplan_pgm(const FloorplanGrid& grid, const std::string& path);

}  // namespace floc

#endif
