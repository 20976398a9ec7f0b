// Command-line front end: localize, track, cluster, evaluate, synth.
// Every command is a pure function of (config, input files, seed); outputs
// land in --out together with a copy of the resolved configuration.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "floc/evaluation.hpp"
#include "floc/filter.hpp"
#include "floc/observation.hpp"
#include "floc/style.hpp"
#include "floc/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunConfig {
    std::string floorplan, scans, motions, features, meta, truth, pair_probs, scene, traj;
    std::string out = "out";
    long long seed = 1;
    int threads = 1;

    double cell_size = 0.0;  // 0 = use the floorplan resolution
    int o_bins = 16;
    double sigma = 0.1;
    int rays = 40;
    double fov_deg = 108.0;
    double max_range = 10.0;
    double floor_prob = 1e-9;
    bool heatmaps = false;

    double lambda = 0.25;
    double tau = 0.07;
    double gamma = 1.0;
    int knn = 10;
    double teleport = 0.15;
    int blank_threshold = 1;

    std::string thresholds = "0.1,0.5,1.0";
    double success_threshold = 1.0;
    double noise_sigma = 0.0;
};

std::vector<double> parse_thresholds(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stod(tok));
    }
    if (out.empty()) throw floc::ValidationError("no thresholds given");
    return out;
}

// Key = value config file; '#' starts a comment. Any key matching a flag
// name sets that flag's default.
void apply_config_file(const std::string& path, std::map<std::string, std::string>& kv) {
    std::ifstream in(path);
    if (!in) throw floc::IoError("cannot open config file: " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            if (line.find_first_not_of(" \t\r") != std::string::npos)
                throw floc::ParseError(path + ":" + std::to_string(lineno) +
                                       ": expected key = value");
            continue;
        }
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r");
            auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
}

void write_resolved_config(const RunConfig& cfg, const std::string& command) {
    std::ofstream out(fs::path(cfg.out) / "config.resolved");
    out.precision(17);
    out << "command = " << command << '\n'
        << "floorplan = " << cfg.floorplan << '\n'
        << "scans = " << cfg.scans << '\n'
        << "motions = " << cfg.motions << '\n'
        << "features = " << cfg.features << '\n'
        << "meta = " << cfg.meta << '\n'
        << "truth = " << cfg.truth << '\n'
        << "pair_probs = " << cfg.pair_probs << '\n'
        << "scene = " << cfg.scene << '\n'
        << "traj = " << cfg.traj << '\n'
        << "out = " << cfg.out << '\n'
        << "seed = " << cfg.seed << '\n'
        << "threads = " << cfg.threads << '\n'
        << "cell_size = " << cfg.cell_size << '\n'
        << "o_bins = " << cfg.o_bins << '\n'
        << "sigma = " << cfg.sigma << '\n'
        << "rays = " << cfg.rays << '\n'
        << "fov_deg = " << cfg.fov_deg << '\n'
        << "max_range = " << cfg.max_range << '\n'
        << "floor_prob = " << cfg.floor_prob << '\n'
        << "heatmaps = " << (cfg.heatmaps ? 1 : 0) << '\n'
        << "lambda = " << cfg.lambda << '\n'
        << "tau = " << cfg.tau << '\n'
        << "gamma = " << cfg.gamma << '\n'
        << "knn = " << cfg.knn << '\n'
        << "teleport = " << cfg.teleport << '\n'
        << "blank_threshold = " << cfg.blank_threshold << '\n'
        << "thresholds = " << cfg.thresholds << '\n'
        << "success_threshold = " << cfg.success_threshold << '\n'
        << "noise_sigma = " << cfg.noise_sigma << '\n';
}

floc::PoseGridSpec grid_spec_for(const floc::FloorplanGrid& grid, const RunConfig& cfg) {
    double cell = cfg.cell_size > 0.0 ? cfg.cell_size : grid.resolution();
    floc::PoseGridSpec spec;
    spec.cell_size = cell;
    spec.origin_x = grid.origin_x();
    spec.origin_y = grid.origin_y();
    spec.w_cells = static_cast<int>(std::lround(grid.cols() * grid.resolution() / cell));
    spec.h_cells = static_cast<int>(std::lround(grid.rows() * grid.resolution() / cell));
    spec.o_bins = cfg.o_bins;
    return spec;
}

floc::LikelihoodParams likelihood_params(const RunConfig& cfg) {
    floc::LikelihoodParams p;
    p.sigma = cfg.sigma;
    p.rays = cfg.rays;
    p.fov = cfg.fov_deg * floc::kPi / 180.0;
    p.max_range = cfg.max_range;
    return p;
}

std::vector<floc::Pose> load_pose_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw floc::IoError("cannot open pose file: " + path);
    std::vector<floc::Pose> poses;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line.rfind("step", 0) == 0 || line.rfind("x_m", 0) == 0) continue;
        std::stringstream ss(line);
        std::string tok;
        std::vector<double> vals;
        while (std::getline(ss, tok, ',')) vals.push_back(std::stod(tok));
        if (vals.size() == 3)
            poses.emplace_back(vals[0], vals[1], vals[2]);
        else if (vals.size() >= 4)
            poses.emplace_back(vals[1], vals[2], vals[3]);  // step,x,y,theta
        else
            throw floc::ParseError(path + ":" + std::to_string(lineno) + ": bad pose row");
    }
    return poses;
}

void save_pose_csv(const std::vector<floc::Pose>& poses, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw floc::IoError("cannot write pose file: " + path);
    out.precision(17);
    out << "step,x_m,y_m,theta_rad\n";
    for (std::size_t i = 0; i < poses.size(); ++i)
        out << i << ',' << poses[i].x << ',' << poses[i].y << ',' << poses[i].theta << '\n';
}

// Top-2 spatial modes: mass within 0.5 m of the strongest cell, then of
// the strongest cell at least 1 m away. Emitted per step so repeated-room
// ambiguity shows up directly in the track output.
std::pair<double, double> mode_masses(const floc::ProbMap& map) {
    const auto& s = map.spec();
    std::vector<double> proj(static_cast<std::size_t>(s.h_cells) * s.w_cells, 0.0);
    for (int r = 0; r < s.h_cells; ++r)
        for (int c = 0; c < s.w_cells; ++c)
            for (int k = 0; k < s.o_bins; ++k)
                proj[static_cast<std::size_t>(r) * s.w_cells + c] += map.at(r, c, k);

    auto peak_around = [&](int pr, int pc, double radius) {
        double mass = 0.0;
        int rad_cells = static_cast<int>(std::ceil(radius / s.cell_size));
        for (int r = std::max(0, pr - rad_cells); r <= std::min(s.h_cells - 1, pr + rad_cells);
             ++r)
            for (int c = std::max(0, pc - rad_cells);
                 c <= std::min(s.w_cells - 1, pc + rad_cells); ++c)
                mass += proj[static_cast<std::size_t>(r) * s.w_cells + c];
        return mass;
    };

    int r1 = 0, c1 = 0;
    double best = -1.0;
    for (int r = 0; r < s.h_cells; ++r)
        for (int c = 0; c < s.w_cells; ++c)
            if (proj[static_cast<std::size_t>(r) * s.w_cells + c] > best) {
                best = proj[static_cast<std::size_t>(r) * s.w_cells + c];
                r1 = r;
                c1 = c;
            }
    double m1 = peak_around(r1, c1, 0.5);

    best = -1.0;
    int r2 = r1, c2 = c1;
    double min_sep = 1.0 / s.cell_size;
    for (int r = 0; r < s.h_cells; ++r)
        for (int c = 0; c < s.w_cells; ++c) {
            if (std::hypot(double(r - r1), double(c - c1)) < min_sep) continue;
            if (proj[static_cast<std::size_t>(r) * s.w_cells + c] > best) {
                best = proj[static_cast<std::size_t>(r) * s.w_cells + c];
                r2 = r;
                c2 = c;
            }
        }
    double m2 = (r2 == r1 && c2 == c1) ? 0.0 : peak_around(r2, c2, 0.5);
    return {m1, m2};
}

int cmd_localize(const RunConfig& cfg) {
    auto grid = floc::load_floorplan(cfg.floorplan);
    auto scans = floc::load_scans(cfg.scans);
    if (scans.empty()) throw floc::ValidationError("scan file is empty");
    auto spec = grid_spec_for(grid, cfg);
    auto params = likelihood_params(cfg);
    if (static_cast<int>(scans[0].size()) != params.rays)
        throw floc::ValidationError("scan has " + std::to_string(scans[0].size()) +
                                    " rays but config expects " + std::to_string(params.rays));

    auto map = floc::likelihood_map(grid, scans[0], spec, params, cfg.threads);
    auto pose = floc::argmax_pose(map);

    fs::create_directories(cfg.out);
    floc::save_probmap(map, (fs::path(cfg.out) / "probmap.bin").string());
    floc::save_heatmap(map, (fs::path(cfg.out) / "heatmap.pgm").string());
    json j;
    j["x_m"] = pose.x;
    j["y_m"] = pose.y;
    j["theta_rad"] = pose.theta;
    std::ofstream pose_out(fs::path(cfg.out) / "pose.json");
    pose_out << j.dump(2) << '\n';
    write_resolved_config(cfg, "localize");
    std::cout << "pose: " << pose.x << ' ' << pose.y << ' ' << pose.theta << '\n';
    return 0;
}

int cmd_track(const RunConfig& cfg) {
    auto grid = floc::load_floorplan(cfg.floorplan);
    auto scans = floc::load_scans(cfg.scans);
    auto motions = cfg.motions.empty() ? std::vector<floc::MotionStep>{}
                                       : floc::load_motions(cfg.motions);
    if (scans.empty()) throw floc::ValidationError("scan file is empty");
    if (motions.size() != scans.size() - 1)
        throw floc::ValidationError("need " + std::to_string(scans.size() - 1) +
                                    " motions for " + std::to_string(scans.size()) +
                                    " scans, got " + std::to_string(motions.size()));

    floc::TrackParams params;
    params.spec = grid_spec_for(grid, cfg);
    params.likelihood = likelihood_params(cfg);
    params.floor_prob = cfg.floor_prob;
    params.threads = cfg.threads;

    auto steps = floc::track(grid, scans, motions, params);

    fs::create_directories(cfg.out);
    std::ofstream traj(fs::path(cfg.out) / "trajectory.csv");
    traj.precision(17);
    traj << "step,x_m,y_m,theta_rad,mode1_mass,mode2_mass\n";
    for (std::size_t t = 0; t < steps.size(); ++t) {
        auto [m1, m2] = mode_masses(steps[t].posterior);
        traj << t << ',' << steps[t].estimate.x << ',' << steps[t].estimate.y << ','
             << steps[t].estimate.theta << ',' << m1 << ',' << m2 << '\n';
        if (cfg.heatmaps) {
            std::ostringstream name;
            name << "posterior_" << t << ".pgm";
            floc::save_heatmap(steps[t].posterior, (fs::path(cfg.out) / name.str()).string());
        }
    }

    if (!cfg.truth.empty()) {
        auto truth = load_pose_csv(cfg.truth);
        if (truth.size() != steps.size())
            throw floc::ValidationError("truth has " + std::to_string(truth.size()) +
                                        " poses, trajectory has " +
                                        std::to_string(steps.size()));
        floc::eval::RunMetrics run;
        run.name = "track";
        run.sequences.emplace_back();
        for (std::size_t t = 0; t < steps.size(); ++t)
            run.sequences[0].push_back({steps[t].estimate, truth[t]});
        auto thresholds = parse_thresholds(cfg.thresholds);
        auto agg = floc::eval::report({run}, thresholds, cfg.success_threshold);
        floc::eval::write_report_json(agg, {run}, thresholds, cfg.success_threshold,
                                      (fs::path(cfg.out) / "report.json").string());
        std::cout << floc::eval::format_report_table(agg);
    }
    write_resolved_config(cfg, "track");
    return 0;
}

int cmd_cluster(const RunConfig& cfg) {
    auto metas = floc::style::load_metadata(cfg.meta);
    auto features = floc::style::load_features(cfg.features);

    auto kept_ids = floc::style::filter_blank(metas, cfg.blank_threshold);
    std::map<std::string, const floc::style::EpisodeMeta*> meta_by_id;
    for (const auto& m : metas) meta_by_id[m.image_id] = &m;
    std::map<std::string, const floc::style::FeatureRecord*> feat_by_id;
    for (const auto& f : features) feat_by_id[f.image_id] = &f;

    std::vector<floc::style::EpisodeMeta> kept_metas;
    std::vector<floc::style::FeatureRecord> kept_feats;
    for (const auto& id : kept_ids) {
        auto it = feat_by_id.find(id);
        if (it == feat_by_id.end())
            throw floc::ValidationError("no feature vector for image " + id);
        kept_metas.push_back(*meta_by_id[id]);
        kept_feats.push_back(*it->second);
    }
    if (kept_feats.empty()) throw floc::ValidationError("no images survive the blank filter");

    auto distances = floc::style::distance_matrix(kept_feats);
    auto constraints = floc::style::build_constraints(kept_metas);
    auto refined = floc::style::refine(distances, constraints, cfg.lambda);
    auto graph = floc::style::build_similarity_graph(refined, cfg.knn);
    auto labels = floc::style::infomap_partition(graph, cfg.teleport,
                                                 static_cast<std::uint64_t>(cfg.seed));

    fs::create_directories(cfg.out);
    floc::style::save_labels(kept_ids, labels, (fs::path(cfg.out) / "labels.csv").string());

    int k = *std::max_element(labels.begin(), labels.end()) + 1;
    std::vector<int> sizes(k, 0);
    for (int l : labels) sizes[l] += 1;

    json j;
    j["n_images"] = kept_ids.size();
    j["n_discarded"] = metas.size() - kept_ids.size();
    j["k"] = k;
    j["cluster_sizes"] = sizes;
    j["map_equation_bits"] = floc::style::map_equation(graph, labels, cfg.teleport);

    if (k >= 1) {
        auto centroids = floc::style::compute_centroids(kept_feats, labels);
        double lc = 0.0;
        for (std::size_t i = 0; i < kept_feats.size(); ++i)
            lc += floc::style::contrastive_loss(kept_feats[i].vector, labels[i], centroids,
                                                cfg.tau)
                      .loss;
        lc /= static_cast<double>(kept_feats.size());
        j["loss_contrastive"] = k == 1 ? 0.0 : lc;

        if (!cfg.pair_probs.empty()) {
            std::ifstream in(cfg.pair_probs);
            if (!in) throw floc::IoError("cannot open pair-prob file: " + cfg.pair_probs);
            std::vector<double> probs;
            std::vector<int> pair_labels;
            std::string line;
            while (std::getline(in, line)) {
                if (line.empty() || line.rfind("p,", 0) == 0) continue;
                auto comma = line.find(',');
                if (comma == std::string::npos)
                    throw floc::ParseError(cfg.pair_probs + ": expected p,y rows");
                probs.push_back(std::stod(line.substr(0, comma)));
                pair_labels.push_back(std::stoi(line.substr(comma + 1)));
            }
            auto lp = floc::style::style_pair_loss(probs, pair_labels);
            j["loss_pred"] = lp.loss;
            j["loss_total"] =
                floc::style::total_loss(k == 1 ? 0.0 : lc, lp.loss, cfg.gamma);
        }
    }

    std::ofstream rep(fs::path(cfg.out) / "cluster_report.json");
    rep << j.dump(2) << '\n';
    write_resolved_config(cfg, "cluster");
    std::cout << "clusters: " << k << '\n';
    return 0;
}

int cmd_evaluate(const RunConfig& cfg) {
    auto predicted = load_pose_csv(cfg.scans.empty() ? cfg.traj : cfg.scans);
    auto truth = load_pose_csv(cfg.truth);
    if (predicted.size() != truth.size())
        throw floc::ValidationError("prediction/truth length mismatch");
    floc::eval::RunMetrics run;
    run.name = "evaluate";
    run.sequences.emplace_back();
    for (std::size_t i = 0; i < predicted.size(); ++i)
        run.sequences[0].push_back({predicted[i], truth[i]});

    auto thresholds = parse_thresholds(cfg.thresholds);
    auto agg = floc::eval::report({run}, thresholds, cfg.success_threshold);
    fs::create_directories(cfg.out);
    floc::eval::write_report_json(agg, {run}, thresholds, cfg.success_threshold,
                                  (fs::path(cfg.out) / "report.json").string());
    write_resolved_config(cfg, "evaluate");
    std::cout << floc::eval::format_report_table(agg);
    return 0;
}

int cmd_synth(const RunConfig& cfg) {
    floc::FloorplanGrid grid(1, 1, 1.0);
    std::vector<floc::Pose> waypoints;

    if (cfg.scene == "two_room") {
        auto scene = floc::synth::two_room_scene();
        grid = scene.grid;
        if (cfg.traj.empty()) {
            // Room A center, out through the door, then along the corridor.
            double down = 1.5 * floc::kPi;
            waypoints = {
                {1.55, 2.95, down}, {1.55, 2.35, down}, {1.55, 1.75, down},
                {1.55, 1.15, down}, {1.55, 0.55, floc::kPi}, {2.15, 0.55, floc::kPi},
            };
        }
    } else if (cfg.scene.rfind("clutter", 0) == 0) {
        grid = floc::synth::random_cluttered_floorplan(
            32, 32, 0.1, static_cast<std::uint64_t>(cfg.seed));
    } else {
        grid = floc::synth::synth_floorplan(floc::synth::load_scene_spec(cfg.scene));
    }
    if (!cfg.traj.empty()) waypoints = load_pose_csv(cfg.traj);
    if (waypoints.empty()) {
        // Default: hold station at the first free cell center found.
        for (int r = 0; r < grid.rows() && waypoints.empty(); ++r)
            for (int c = 0; c < grid.cols() && waypoints.empty(); ++c)
                if (!grid.occupied(r, c))
                    waypoints.emplace_back(grid.cell_center_x(c), grid.cell_center_y(r), 0.0);
    }

    auto data = floc::synth::synth_trajectory(grid, waypoints, cfg.rays,
                                              cfg.fov_deg * floc::kPi / 180.0, cfg.max_range,
                                              cfg.noise_sigma,
                                              static_cast<std::uint64_t>(cfg.seed));

    fs::create_directories(cfg.out);
    floc::save_floorplan(grid, (fs::path(cfg.out) / "floorplan.txt").string());
    floc::save_scans(data.scans, (fs::path(cfg.out) / "scans.jsonl").string());
    floc::save_motions(data.motions, (fs::path(cfg.out) / "motions.jsonl").string());
    save_pose_csv(data.poses, (fs::path(cfg.out) / "truth.csv").string());
    write_resolved_config(cfg, "synth");
    std::cout << "synthesized " << data.scans.size() << " frames\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Floorplan localization toolkit"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path;

    // Shared flags; registered on each subcommand so "subcmd --flag" works.
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "key = value config file");
        sub->add_option("--floorplan", cfg.floorplan);
        sub->add_option("--scans", cfg.scans);
        sub->add_option("--motions", cfg.motions);
        sub->add_option("--features", cfg.features);
        sub->add_option("--meta", cfg.meta);
        sub->add_option("--truth", cfg.truth);
        sub->add_option("--pair-probs", cfg.pair_probs);
        sub->add_option("--scene", cfg.scene);
        sub->add_option("--traj", cfg.traj);
        sub->add_option("--out", cfg.out);
        sub->add_option("--seed", cfg.seed);
        sub->add_option("--threads", cfg.threads)->check(CLI::PositiveNumber);
        sub->add_option("--cell-size", cfg.cell_size);
        sub->add_option("--o-bins", cfg.o_bins)->check(CLI::PositiveNumber);
        sub->add_option("--sigma", cfg.sigma)->check(CLI::PositiveNumber);
        sub->add_option("--rays", cfg.rays)->check(CLI::PositiveNumber);
        sub->add_option("--fov-deg", cfg.fov_deg)->check(CLI::PositiveNumber);
        sub->add_option("--max-range", cfg.max_range)->check(CLI::PositiveNumber);
        sub->add_option("--floor-prob", cfg.floor_prob);
        sub->add_flag("--heatmaps", cfg.heatmaps);
        sub->add_option("--lambda", cfg.lambda);
        sub->add_option("--tau", cfg.tau)->check(CLI::PositiveNumber);
        sub->add_option("--gamma", cfg.gamma);
        sub->add_option("--knn", cfg.knn)->check(CLI::PositiveNumber);
        sub->add_option("--teleport", cfg.teleport);
        sub->add_option("--blank-threshold", cfg.blank_threshold);
        sub->add_option("--thresholds", cfg.thresholds);
        sub->add_option("--success-threshold", cfg.success_threshold);
        sub->add_option("--noise-sigma", cfg.noise_sigma);
        // Config-file values are injected before the argv flags, so the
        // explicit flag must win on repetition.
        for (auto* opt : sub->get_options())
            opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    };

    auto* localize = app.add_subcommand("localize", "single-frame pose estimate");
    auto* track = app.add_subcommand("track", "histogram-filter trajectory tracking");
    auto* cluster = app.add_subcommand("cluster", "constrained feature clustering");
    auto* evaluate = app.add_subcommand("evaluate", "recall/RMSE report from pose files");
    auto* synth = app.add_subcommand("synth", "synthetic scene + trajectory dataset");
    for (auto* sub : {localize, track, cluster, evaluate, synth}) add_common(sub);

    // Config file values act as defaults: parse once to find --config, load
    // it, then parse again so explicit flags win.
    try {
        app.allow_extras();
        app.parse(argc, argv);
        if (!config_path.empty()) {
            std::map<std::string, std::string> kv;
            apply_config_file(config_path, kv);
            // Inject the config pairs right after the subcommand token so
            // they parse as subcommand flags, before the explicit argv ones.
            std::vector<std::string> args;
            bool injected = false;
            for (int i = 1; i < argc; ++i) {
                args.push_back(argv[i]);
                if (!injected && app.get_subcommand_no_throw(argv[i]) != nullptr) {
                    injected = true;
                    for (auto& [k, v] : kv) {
                        args.push_back("--" + k);
                        args.push_back(v);
                    }
                }
            }
            std::vector<const char*> cargs{argv[0]};
            for (auto& a : args) cargs.push_back(a.c_str());
            app.clear();
            app.parse(static_cast<int>(cargs.size()), cargs.data());
        }
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const floc::ValidationError& e) {
        std::cerr << "error: config: " << e.what() << '\n';
        return 2;
    } catch (const floc::Error& e) {
        std::cerr << "error: config: " << e.what() << '\n';
        return 2;
    }

    try {
        if (localize->parsed()) return cmd_localize(cfg);
        if (track->parsed()) return cmd_track(cfg);
        if (cluster->parsed()) return cmd_cluster(cfg);
        if (evaluate->parsed()) return cmd_evaluate(cfg);
        if (synth->parsed()) return cmd_synth(cfg);
        std::cerr << "error: config: no subcommand\n";
        return 2;
    } catch (const floc::ValidationError& e) {
        std::cerr << "error: validation: " << e.what() << '\n';
        return 2;
    } catch (const floc::ParseError& e) {
        std::cerr << "error: parse: " << e.what() << '\n';
        return 2;
    } catch (const floc::Error& e) {
        std::cerr << "error: runtime: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: runtime: " << e.what() << '\n';
        return 3;
    }
}
