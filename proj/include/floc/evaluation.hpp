#ifndef FLOC_EVALUATION_HPP
#define FLOC_EVALUATION_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "floc/floorplan.hpp"

namespace floc::eval {

struct EmptyInput : ValidationError {
    using ValidationError::ValidationError;
};
struct InconsistentConfig : ValidationError {
    using ValidationError::ValidationError;
};

struct PosePair {
    Pose predicted;
    Pose truth;

    double positional_error() const {
        return std::hypot(predicted.x - truth.x, predicted.y - truth.y);
    }
    double angular_error() const { return angle_diff(predicted.theta, truth.theta); }
};

// Recall percentages at each positional threshold (error <= threshold).
std::vector<double> recall(const std::vector<PosePair>& pairs,
                           const std::vector<double>& thresholds_m);

// Recall at 1 m with angular error strictly below the bound.
double recall_with_angle(const std::vector<PosePair>& pairs, double threshold_m,
                         double angle_bound_rad);

// Per-step error sequences. A sequence is successful when its final error
// is within the threshold; RMSE(S) averages each successful sequence's
// steps from its first entry into the threshold onward.
struct RmseResult {
    std::optional<double> rmse_s;
    double rmse_a = 0.0;
};
RmseResult rmse(const std::vector<std::vector<PosePair>>& sequences,
                double success_threshold_m);

struct MetricReport {
    std::map<double, double> recall_at;  // threshold (m) -> percentage
    double recall_1m_30deg = 0.0;
    std::optional<double> rmse_success;
    double rmse_all = 0.0;
    std::string success_rule;
};

struct RunMetrics {
    std::string name;
    std::vector<std::vector<PosePair>> sequences;
};

// Aggregates runs (pooled pairs) into one report; all runs must be scored
// against the same thresholds.
MetricReport report(const std::vector<RunMetrics>& runs, const std::vector<double>& thresholds_m,
                    double success_threshold_m = 1.0);

// JSON report {config, per_run, aggregate} plus an aligned text table with
// columns R@0.1 m / 0.5 m / 1 m / 1 m 30deg.
void write_report_json(const MetricReport& aggregate, const std::vector<RunMetrics>& runs,
                       const std::vector<double>& thresholds_m, double success_threshold_m,
                       const std::string& path);
std::string format_report_table(const MetricReport& aggregate);

}  // namespace floc::eval

#endif
