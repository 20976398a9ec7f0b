#ifndef FLOC_FILTER_HPP
#define FLOC_FILTER_HPP

#include <string>
#include <vector>

#include "floc/observation.hpp"

namespace floc {

// Body-frame odometry step with translational/rotational process noise.
struct MotionStep {
    double dx = 0.0;      // forward, meters
    double dy = 0.0;      // lateral (left), meters
    double dtheta = 0.0;  // radians
    double sigma_trans = 0.0;
    double sigma_rot = 0.0;
};

// Belief over the pose grid plus the probability floor applied before each
// measurement update to keep suppressed modes recoverable.
struct TrackState {
    ProbMap posterior;
    int step_index = 0;
    double floor_prob = 1e-9;
};

// Motion update: per orientation bin, rotate the body-frame displacement
// into the world frame, shift the spatial slice by the fractional offset
// with bilinear mass splitting, shift orientation bins by dtheta with
// linear splitting, then blur with a separable Gaussian truncated at
// 3 sigma. Mass landing on occupied cells or outside the map is
// redistributed proportionally over free cells before renormalization.
TrackState predict(const TrackState& state, const MotionStep& motion,
                   const FloorplanGrid& grid);

// Measurement update: posterior' ~ max(posterior, floor * uniform) .* likelihood.
TrackState update(const TrackState& state, const ProbMap& likelihood);

struct TrackParams {
    PoseGridSpec spec;
    LikelihoodParams likelihood;
    double floor_prob = 1e-9;
    int threads = 1;
};

struct TrackStep {
    Pose estimate;
    ProbMap posterior;
};

// Full tracking run: uniform prior over free cells, then alternating
// update / predict. motions.size() must be scans.size() - 1.
std::vector<TrackStep> track(const FloorplanGrid& grid,
                             const std::vector<DepthRayScan>& scans,
                             const std::vector<MotionStep>& motions,
                             const TrackParams& params);

// Uniform belief over cells whose centers are free in the floorplan.
ProbMap uniform_free_prior(const FloorplanGrid& grid, const PoseGridSpec& spec);

// --- Motion file I/O ----------------------------------------------------
//
// JSON-lines: {"step": ..., "dx_m": ..., "dy_m": ..., "dtheta_rad": ...}

std::vector<MotionStep> load_motions(const std::string& path);
void save_motions(const std::vector<MotionStep>& motions, const std::string& path);

}  // namespace floc

#endif
