#ifndef FLOC_POSESPACE_HPP
#define FLOC_POSESPACE_HPP

#include <string>
#include <vector>

#include "floc/common.hpp"
#include "floc/floorplan.hpp"

namespace floc {

struct AllZero : ValidationError {
    using ValidationError::ValidationError;
};
struct DimensionMismatch : ValidationError {
    using ValidationError::ValidationError;
};

// Discretization of the pose space: h_cells x w_cells spatial cells of
// cell_size meters, o_bins orientation bins with bin k centered at 2*pi*k/O.
struct PoseGridSpec {
    int h_cells = 1;
    int w_cells = 1;
    int o_bins = 1;
    double cell_size = 0.1;
    double origin_x = 0.0;
    double origin_y = 0.0;

    bool operator==(const PoseGridSpec&) const = default;
};

// Non-negative tensor over discretized poses, row-major (row, col, bin).
// Both priors and posteriors are ProbMaps; `normalized` flags that the
// entries sum to 1. Values are treated as immutable once built.
class ProbMap {
   public:
    explicit ProbMap(const PoseGridSpec& spec, double fill = 0.0);

    const PoseGridSpec& spec() const { return spec_; }
    bool normalized() const { return normalized_; }
    void set_normalized(bool v) { normalized_ = v; }

    std::size_t size() const { return values_.size(); }
    double& at(int row, int col, int bin) { return values_[index(row, col, bin)]; }
    double at(int row, int col, int bin) const { return values_[index(row, col, bin)]; }
    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

    std::size_t index(int row, int col, int bin) const {
        return (static_cast<std::size_t>(row) * spec_.w_cells + col) * spec_.o_bins + bin;
    }

    double cell_x(int col) const { return spec_.origin_x + (col + 0.5) * spec_.cell_size; }
    double cell_y(int row) const { return spec_.origin_y + (row + 0.5) * spec_.cell_size; }
    double bin_theta(int bin) const { return kTwoPi * bin / spec_.o_bins; }

   private:
    PoseGridSpec spec_;
    std::vector<double> values_;
    bool normalized_ = false;
};

// Cell-center pose of the maximal entry; ties go to the lowest linear index.
Pose argmax_pose(const ProbMap& map);

// Scales entries to sum to 1 (fixed left-to-right summation order).
ProbMap normalize(const ProbMap& map);

// Nearest-neighbor replication of each spatial cell factor x factor;
// orientation bins untouched, cell_size divided by factor.
ProbMap upsample(const ProbMap& map, int factor);

// --- Serialization ------------------------------------------------------
//
// "PROBMAP v1 <H> <W> <O> <cell_size> <origin_x> <origin_y>" header line,
// then little-endian float64 payload in (row, col, bin) order.

ProbMap load_probmap(const std::string& path);
void save_probmap(const ProbMap& map, const std::string& path);

// Per-cell maximum over orientation bins, scaled linearly from [0, max]
// to 8-bit grayscale, written as binary PGM.
void save_heatmap(const ProbMap& map, const std::string& path);

}  // namespace floc

#endif
