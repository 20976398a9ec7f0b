#ifndef FLOC_OBSERVATION_HPP
#define FLOC_OBSERVATION_HPP

#include <string>
#include <vector>

#include "floc/floorplan.hpp"
#include "floc/posespace.hpp"

namespace floc {

struct LengthMismatch : ValidationError {
    using ValidationError::ValidationError;
};

// Kernel and ray geometry for scoring a scan against candidate poses.
struct LikelihoodParams {
    double sigma = 0.1;  // meters; kernel scale
    int rays = 40;
    double fov = 108.0 * kPi / 180.0;
    double max_range = 10.0;
};

struct FusionWeight {
    double omega = 1.0;  // in [0, 1]
};

// Scores every free pose cell against the scan: value =
// exp(-||scan - gt_scan(pose)||_1 / (sigma * l)). Occupied or out-of-map
// poses get 0. Result is globally normalized. Per-pose scoring is pure,
// so rows are scored on `threads` workers with bitwise-identical output
// (the normalizer sums in fixed index order).
ProbMap likelihood_map(const FloorplanGrid& grid, const DepthRayScan& scan,
                       const PoseGridSpec& spec, const LikelihoodParams& params,
                       int threads = 1);

// w * upsample(single, factor) + (1 - w) * multi, then normalized.
ProbMap fuse_maps(const ProbMap& single_map, const ProbMap& multi_map, FusionWeight w,
                  int factor);

// L1 depth loss plus a 1 - cosine shape term, with the analytic gradient
// w.r.t. the prediction (subgradient 0 at L1 kinks).
struct FlocLoss {
    double loss = 0.0;
    std::vector<double> grad;
};
FlocLoss floc_loss(const DepthRayScan& pred, const DepthRayScan& gt, double epsilon = 1e-8);

// --- Scan file I/O ------------------------------------------------------
//
// JSON-lines, one record per frame:
// {"frame_id": ..., "l": ..., "fov_deg": ..., "max_range_m": ..., "depths": [...]}

std::vector<DepthRayScan> load_scans(const std::string& path);
void save_scans(const std::vector<DepthRayScan>& scans, const std::string& path);

}  // namespace floc

#endif
