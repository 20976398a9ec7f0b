#include "floc/evaluation.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace floc::eval {

std::vector<double> recall(const std::vector<PosePair>& pairs,
                           const std::vector<double>& thresholds_m) {
    if (pairs.empty()) throw EmptyInput("recall: no pose pairs");
    for (double t : thresholds_m)
        if (!(t > 0.0)) throw ValidationError("recall: thresholds must be positive");

    std::vector<double> out;
    out.reserve(thresholds_m.size());
    for (double t : thresholds_m) {
        std::size_t hits = 0;
        for (const auto& p : pairs)
            if (p.positional_error() <= t) ++hits;
        out.push_back(100.0 * static_cast<double>(hits) / pairs.size());
    }
    return out;
}

double recall_with_angle(const std::vector<PosePair>& pairs, double threshold_m,
                         double angle_bound_rad) {
    if (pairs.empty()) throw EmptyInput("recall: no pose pairs");
    std::size_t hits = 0;
    for (const auto& p : pairs)
        if (p.positional_error() <= threshold_m && std::abs(p.angular_error()) < angle_bound_rad)
            ++hits;
    return 100.0 * static_cast<double>(hits) / pairs.size();
}

RmseResult rmse(const std::vector<std::vector<PosePair>>& sequences,
                double success_threshold_m) {
    RmseResult out;
    double sum_sq_all = 0.0;
    std::size_t count_all = 0;
    double sum_sq_s = 0.0;
    std::size_t count_s = 0;

    for (const auto& seq : sequences) {
        if (seq.empty()) continue;
        for (const auto& p : seq) {
            double e = p.positional_error();
            sum_sq_all += e * e;
            ++count_all;
        }
        if (seq.back().positional_error() <= success_threshold_m) {
            // Average from the first step inside the threshold onward.
            std::size_t start = 0;
            while (start < seq.size() &&
                   seq[start].positional_error() > success_threshold_m)
                ++start;
            for (std::size_t i = start; i < seq.size(); ++i) {
                double e = seq[i].positional_error();
                sum_sq_s += e * e;
                ++count_s;
            }
        }
    }
    if (count_all == 0) throw EmptyInput("rmse: no pose pairs");
    out.rmse_a = std::sqrt(sum_sq_all / count_all);
    if (count_s > 0) out.rmse_s = std::sqrt(sum_sq_s / count_s);
    return out;
}

MetricReport report(const std::vector<RunMetrics>& runs, const std::vector<double>& thresholds_m,
                    double success_threshold_m) {
    if (runs.empty()) throw EmptyInput("report: no runs");
    if (thresholds_m.empty()) throw InconsistentConfig("report: no thresholds");

    std::vector<PosePair> pooled;
    std::vector<std::vector<PosePair>> pooled_sequences;
    for (const auto& run : runs)
        for (const auto& seq : run.sequences) {
            pooled.insert(pooled.end(), seq.begin(), seq.end());
            pooled_sequences.push_back(seq);
        }

    MetricReport r;
    auto rec = recall(pooled, thresholds_m);
    for (std::size_t i = 0; i < thresholds_m.size(); ++i) r.recall_at[thresholds_m[i]] = rec[i];
    r.recall_1m_30deg = recall_with_angle(pooled, 1.0, 30.0 * kPi / 180.0);
    auto rm = rmse(pooled_sequences, success_threshold_m);
    r.rmse_success = rm.rmse_s;
    r.rmse_all = rm.rmse_a;
    std::ostringstream rule;
    rule << "sequence successful if final error <= " << success_threshold_m
         << " m; RMSE(S) from first threshold entry onward";
    r.success_rule = rule.str();
    return r;
}

static nlohmann::json metrics_to_json(const MetricReport& r) {
    nlohmann::json j;
    for (const auto& [t, v] : r.recall_at) j["r_at"][std::to_string(t)] = v;
    j["r_1m_30"] = r.recall_1m_30deg;
    if (r.rmse_success)
        j["rmse_s"] = *r.rmse_success;
    else
        j["rmse_s"] = nullptr;
    j["rmse_a"] = r.rmse_all;
    return j;
}

void write_report_json(const MetricReport& aggregate, const std::vector<RunMetrics>& runs,
                       const std::vector<double>& thresholds_m, double success_threshold_m,
                       const std::string& path) {
    nlohmann::json j;
    j["config"]["thresholds_m"] = thresholds_m;
    j["config"]["success_threshold_m"] = success_threshold_m;
    j["config"]["success_rule"] = aggregate.success_rule;
    j["per_run"] = nlohmann::json::array();
    for (const auto& run : runs) {
        MetricReport r = report({run}, thresholds_m, success_threshold_m);
        nlohmann::json jr = metrics_to_json(r);
        jr["name"] = run.name;
        j["per_run"].push_back(jr);
    }
    j["aggregate"] = metrics_to_json(aggregate);

    std::ofstream out(path);
    if (!out) throw IoError("cannot write report: " + path);
    out << j.dump(2) << '\n';
    if (!out) throw IoError("write failed: " + path);
}

std::string format_report_table(const MetricReport& r) {
    std::ostringstream os;
    os << "R@";
    for (const auto& [t, v] : r.recall_at) os << ' ' << t << " m";
    os << "  1 m 30deg\n";
    os.setf(std::ios::fixed);
    os.precision(1);
    for (const auto& [t, v] : r.recall_at) os << v << "  ";
    os << r.recall_1m_30deg << '\n';
    os << "RMSE(S): ";
    if (r.rmse_success)
        os << *r.rmse_success;
    else
        os << "n/a";
    os << "  RMSE(A): " << r.rmse_all << '\n';
    return os.str();
}

}  // namespace floc::eval
