#include "floc/floorplan.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace floc {

FloorplanGrid::FloorplanGrid(int rows, int cols, double resolution, double origin_x,
                             double origin_y)
    : rows_(rows),
      cols_(cols),
      resolution_(resolution),
      origin_x_(origin_x),
      origin_y_(origin_y),
      cells_(static_cast<std::size_t>(rows) * cols, 0) {
    if (rows < 1 || cols < 1) throw ValidationError("grid dimensions must be >= 1");
    if (!(resolution > 0.0)) throw ValidationError("grid resolution must be positive");
}

std::size_t FloorplanGrid::occupied_count() const {
    std::size_t n = 0;
    for (auto c : cells_) n += c;
    return n;
}

double cast_ray(const FloorplanGrid& grid, const Pose& origin, double bearing,
                double max_range) {
    if (!(max_range > 0.0)) throw ValidationError("cast_ray: max_range must be positive");

    int row = grid.row_of(origin.y);
    int col = grid.col_of(origin.x);
    if (!grid.in_bounds(row, col))
        throw OriginOutOfBounds("cast_ray: origin outside the grid");
    if (grid.occupied(row, col))
        throw OriginOccupied("cast_ray: origin cell is occupied");

    const double res = grid.resolution();
    const double dx = std::cos(bearing);
    const double dy = std::sin(bearing);
    constexpr double inf = std::numeric_limits<double>::infinity();

    // Parametrize position as origin + t * (dx, dy); t is metric distance.
    int step_col = 0, step_row = 0;
    double t_max_x = inf, t_max_y = inf;
    double t_delta_x = inf, t_delta_y = inf;
    if (dx > 0.0) {
        step_col = 1;
        t_max_x = (grid.origin_x() + (col + 1) * res - origin.x) / dx;
        t_delta_x = res / dx;
    } else if (dx < 0.0) {
        step_col = -1;
        t_max_x = (grid.origin_x() + col * res - origin.x) / dx;
        t_delta_x = -res / dx;
    }
    if (dy > 0.0) {
        step_row = 1;
        t_max_y = (grid.origin_y() + (row + 1) * res - origin.y) / dy;
        t_delta_y = res / dy;
    } else if (dy < 0.0) {
        step_row = -1;
        t_max_y = (grid.origin_y() + row * res - origin.y) / dy;
        t_delta_y = -res / dy;
    }

    while (true) {
        double t;
        if (t_max_x <= t_max_y) {
            t = t_max_x;
            col += step_col;
            t_max_x += t_delta_x;
        } else {
            t = t_max_y;
            row += step_row;
            t_max_y += t_delta_y;
        }
        if (t > max_range) return max_range;
        if (!grid.in_bounds(row, col)) return max_range;  // left the map, no wall
        if (grid.occupied(row, col)) return t;            // distance to the entry face
    }
}

DepthRayScan gt_scan(const FloorplanGrid& grid, const Pose& pose, int l, double fov,
                     double max_range) {
    if (l < 1) throw ValidationError("gt_scan: ray count must be >= 1");
    if (!(fov > 0.0) || fov > kTwoPi) throw ValidationError("gt_scan: fov must be in (0, 2*pi]");

    DepthRayScan scan;
    scan.fov = fov;
    scan.max_range = max_range;
    scan.depths.resize(l);
    for (int k = 0; k < l; ++k) {
        double offset = (l > 1) ? -fov / 2.0 + k * fov / (l - 1) : 0.0;
        scan.depths[k] = cast_ray(grid, pose, pose.theta + offset, max_range);
    }
    return scan;
}

// --- I/O ----------------------------------------------------------------

FloorplanGrid load_floorplan(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open floorplan file: " + path);

    std::string magic;
    in >> magic;
    if (magic == "P5") {
        in.close();
        std::ifstream meta(path + ".meta");
        if (!meta)
            throw IoError("PGM floorplan needs a sidecar " + path +
                          ".meta with \"<resolution> <origin_x> <origin_y>\"");
        double res, ox, oy;
        if (!(meta >> res >> ox >> oy))
            throw ParseError("malformed sidecar: " + path + ".meta");
        return load_floorplan_pgm(path, res, ox, oy);
    }
    if (magic != "FLOORPLAN")
        throw ParseError(path + ":1: expected FLOORPLAN or P5 magic, got \"" + magic + "\"");

    std::string version;
    int h = 0, w = 0;
    double res = 0, ox = 0, oy = 0;
    if (!(in >> version >> h >> w >> res >> ox >> oy) || version != "v1")
        throw ParseError(path + ":1: malformed FLOORPLAN v1 header");
    if (h < 1 || w < 1 || !(res > 0.0))
        throw ParseError(path + ":1: invalid dimensions or resolution in header");

    FloorplanGrid grid(h, w, res, ox, oy);
    std::string line;
    std::getline(in, line);  // rest of header line
    for (int r = 0; r < h; ++r) {
        if (!std::getline(in, line))
            throw ParseError(path + ":" + std::to_string(r + 2) + ": missing grid row");
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (static_cast<int>(line.size()) != w)
            throw ParseError(path + ":" + std::to_string(r + 2) + ": row has " +
                             std::to_string(line.size()) + " cells, expected " +
                             std::to_string(w));
        for (int c = 0; c < w; ++c) {
            if (line[c] == '#')
                grid.set_occupied(r, c, true);
            else if (line[c] != '.')
                throw ParseError(path + ":" + std::to_string(r + 2) + ": bad cell char '" +
                                 std::string(1, line[c]) + "' at column " + std::to_string(c));
        }
    }
    return grid;
}

void save_floorplan(const FloorplanGrid& grid, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write floorplan file: " + path);
    out.precision(17);
    out << "FLOORPLAN v1 " << grid.rows() << ' ' << grid.cols() << ' ' << grid.resolution()
        << ' ' << grid.origin_x() << ' ' << grid.origin_y() << '\n';
    for (int r = 0; r < grid.rows(); ++r) {
        for (int c = 0; c < grid.cols(); ++c) out << (grid.occupied(r, c) ? '#' : '.');
        out << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

FloorplanGrid load_floorplan_pgm(const std::string& path, double resolution,
                                 double origin_x, double origin_y) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open PGM file: " + path);
    std::string magic;
    int w = 0, h = 0, maxval = 0;
    in >> magic;
    if (magic != "P5") throw ParseError(path + ": not a binary PGM (P5)");
    auto skip_ws_comments = [&in]() {
        while (true) {
            int ch = in.peek();
            if (ch == '#') {
                std::string dummy;
                std::getline(in, dummy);
            } else if (std::isspace(ch)) {
                in.get();
            } else {
                break;
            }
        }
    };
    skip_ws_comments();
    in >> w;
    skip_ws_comments();
    in >> h;
    skip_ws_comments();
    in >> maxval;
    if (!in || w < 1 || h < 1 || maxval != 255)
        throw ParseError(path + ": malformed PGM header (need 8-bit maxval 255)");
    in.get();  // single whitespace before payload

    std::vector<char> buf(static_cast<std::size_t>(w) * h);
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (in.gcount() != static_cast<std::streamsize>(buf.size()))
        throw ParseError(path + ": truncated PGM payload");

    FloorplanGrid grid(h, w, resolution, origin_x, origin_y);
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c) {
            unsigned char v = static_cast<unsigned char>(buf[static_cast<std::size_t>(r) * w + c]);
            grid.set_occupied(r, c, v < 128);
        }
    return grid;
}

void save_floorplan_pgm(const FloorplanGrid& grid, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write PGM file: " + path);
    out << "P5\n" << grid.cols() << ' ' << grid.rows() << "\n255\n";
    for (int r = 0; r < grid.rows(); ++r)
        for (int c = 0; c < grid.cols(); ++c)
            out.put(grid.occupied(r, c) ? '\0' : '\xff');
    std::ofstream meta(path + ".meta");
    meta.precision(17);
    meta << grid.resolution() << ' ' << grid.origin_x() << ' ' << grid.origin_y() << '\n';
}

}  // namespace floc
