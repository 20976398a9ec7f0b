#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "floc/style.hpp"

namespace fs = std::filesystem;

static std::string g_cli;

int main(int argc, char** argv) {
    // The harness appends the path of the binary under test.
    if (argc > 1 && argv[argc - 1][0] != '-') {
        g_cli = argv[argc - 1];
        --argc;
    }
    doctest::Context ctx;
    ctx.applyCommandLine(argc, argv);
    return ctx.run();
}

namespace {

int run(const std::string& args, std::string* output = nullptr) {
    std::string cmd = '"' + g_cli + "\" " + args;
    std::string log = "clitest_last.log";
    cmd += " > " + log + " 2>&1";
    int rc = std::system(cmd.c_str());
    if (output) {
        std::ifstream in(log);
        std::stringstream ss;
        ss << in.rdbuf();
        *output = ss.str();
    }
#ifdef _WIN32
    return rc;
#else
    return WEXITSTATUS(rc);
#endif
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// step,x,y,theta[,...] rows.
std::vector<std::vector<double>> read_csv(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::vector<std::vector<double>> rows;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string tok;
        std::vector<double> vals;
        while (std::getline(ss, tok, ',')) vals.push_back(std::stod(tok));
        rows.push_back(vals);
    }
    return rows;
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string str() const { return path.string(); }
};

}  // namespace

TEST_CASE("synth two_room emits a complete dataset plus the resolved config") {
    TempDir dir("clitest_synth");
    CHECK(run("synth --scene two_room --out " + dir.str()) == 0);
    for (const char* f :
         {"floorplan.txt", "scans.jsonl", "motions.jsonl", "truth.csv", "config.resolved"})
        CHECK(fs::exists(dir.path / f));
    auto truth = read_csv(dir.path / "truth.csv");
    CHECK(truth.size() == 6);
}

TEST_CASE("synth is byte-identical for a fixed seed") {
    TempDir a("clitest_seed_a"), b("clitest_seed_b"), c("clitest_seed_c");
    std::string base = "synth --scene clutter --noise-sigma 0.05 --seed 7 --out ";
    CHECK(run(base + a.str()) == 0);
    CHECK(run(base + b.str()) == 0);
    CHECK(run("synth --scene clutter --noise-sigma 0.05 --seed 8 --out " + c.str()) == 0);
    CHECK(slurp(a.path / "scans.jsonl") == slurp(b.path / "scans.jsonl"));
    CHECK(slurp(a.path / "floorplan.txt") == slurp(b.path / "floorplan.txt"));
    CHECK(slurp(a.path / "scans.jsonl") != slurp(c.path / "scans.jsonl"));
}

TEST_CASE("localize on a unique scene recovers the true pose") {
    TempDir data("clitest_loc_data"), out("clitest_loc_out");
    REQUIRE(run("synth --scene clutter --seed 5 --out " + data.str()) == 0);
    CHECK(run("localize --floorplan " + (data.path / "floorplan.txt").string() + " --scans " +
              (data.path / "scans.jsonl").string() + " --out " + out.str()) == 0);
    CHECK(fs::exists(out.path / "probmap.bin"));
    CHECK(fs::exists(out.path / "heatmap.pgm"));
    CHECK(fs::exists(out.path / "config.resolved"));

    auto truth = read_csv(data.path / "truth.csv");
    REQUIRE(!truth.empty());
    nlohmann::json pose = nlohmann::json::parse(slurp(out.path / "pose.json"));
    CHECK(std::abs(pose["x_m"].get<double>() - truth[0][1]) <= 0.05 + 1e-9);
    CHECK(std::abs(pose["y_m"].get<double>() - truth[0][2]) <= 0.05 + 1e-9);
}

TEST_CASE("localize reruns are byte-identical") {
    TempDir data("clitest_det_data"), a("clitest_det_a"), b("clitest_det_b");
    REQUIRE(run("synth --scene clutter --seed 9 --out " + data.str()) == 0);
    std::string base = "localize --floorplan " + (data.path / "floorplan.txt").string() +
                       " --scans " + (data.path / "scans.jsonl").string() + " --out ";
    CHECK(run(base + a.str()) == 0);
    CHECK(run(base + b.str()) == 0);
    CHECK(slurp(a.path / "probmap.bin") == slurp(b.path / "probmap.bin"));
    CHECK(slurp(a.path / "heatmap.pgm") == slurp(b.path / "heatmap.pgm"));
    CHECK(slurp(a.path / "pose.json") == slurp(b.path / "pose.json"));
}

TEST_CASE("wrong scan length against the configured ray count exits 2") {
    TempDir data("clitest_len_data"), out("clitest_len_out");
    REQUIRE(run("synth --scene clutter --seed 3 --out " + data.str()) == 0);
    std::string log;
    int rc = run("localize --rays 80 --floorplan " + (data.path / "floorplan.txt").string() +
                     " --scans " + (data.path / "scans.jsonl").string() + " --out " + out.str(),
                 &log);
    CHECK(rc == 2);
    CHECK(log.find("error:") != std::string::npos);
    CHECK(log.find('\n') == log.size() - 1);  // single line
}

TEST_CASE("config file sets defaults and explicit flags win") {
    TempDir data("clitest_cfg_data"), out("clitest_cfg_out");
    REQUIRE(run("synth --scene clutter --seed 3 --out " + data.str()) == 0);
    fs::path cfg_path = data.path / "run.cfg";
    {
        std::ofstream cfg(cfg_path);
        cfg << "# ray count deliberately wrong\n";
        cfg << "rays = 80\n";
        cfg << "floorplan = " << (data.path / "floorplan.txt").string() << "\n";
        cfg << "scans = " << (data.path / "scans.jsonl").string() << "\n";
    }
    CHECK(run("localize --config " + cfg_path.string() + " --out " + out.str()) == 2);
    CHECK(run("localize --config " + cfg_path.string() + " --rays 40 --out " + out.str()) == 0);
}

TEST_CASE("zero-noise synth then track closes the loop") {
    TempDir data("clitest_loop_data"), out("clitest_loop_out");
    REQUIRE(run("synth --scene two_room --out " + data.str()) == 0);
    CHECK(run("track --floorplan " + (data.path / "floorplan.txt").string() + " --scans " +
              (data.path / "scans.jsonl").string() + " --motions " +
              (data.path / "motions.jsonl").string() + " --truth " +
              (data.path / "truth.csv").string() + " --out " + out.str()) == 0);
    CHECK(fs::exists(out.path / "report.json"));

    auto traj = read_csv(out.path / "trajectory.csv");
    auto truth = read_csv(data.path / "truth.csv");
    REQUIRE(traj.size() == truth.size());
    // The corridor disambiguates; the last estimate lands on the true pose.
    const auto& est = traj.back();
    const auto& ref = truth.back();
    CHECK(std::hypot(est[1] - ref[1], est[2] - ref[2]) <= 0.1 + 1e-9);
    // Early in-room steps carry visible mass on both room modes.
    CHECK(traj[0].size() >= 6);
    CHECK(traj[0][5] > 0.2);  // second mode
}

TEST_CASE("two scans with an empty motion file exits 2") {
    TempDir data("clitest_nomot_data"), out("clitest_nomot_out");
    REQUIRE(run("synth --scene two_room --out " + data.str()) == 0);
    fs::path empty = data.path / "empty.jsonl";
    std::ofstream(empty).close();
    std::string log;
    int rc = run("track --floorplan " + (data.path / "floorplan.txt").string() + " --scans " +
                     (data.path / "scans.jsonl").string() + " --motions " + empty.string() +
                     " --out " + out.str(),
                 &log);
    CHECK(rc == 2);
    CHECK(log.find("error: validation:") != std::string::npos);
}

TEST_CASE("cluster separates two orthogonal feature bundles") {
    TempDir data("clitest_clu_data"), out("clitest_clu_out");
    std::vector<floc::style::FeatureRecord> feats;
    std::ofstream meta(data.path / "meta.jsonl");
    for (int i = 0; i < 8; ++i) {
        bool first = i < 4;
        double jitter = 0.02 * i;
        std::vector<double> v = first ? std::vector<double>{1.0, jitter, 0.0}
                                      : std::vector<double>{0.0, jitter, 1.0};
        double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
        for (double& x : v) x /= n;
        std::string id = "img" + std::to_string(i);
        feats.push_back({id, v});
        meta << "{\"image_id\":\"" << id
             << "\",\"scene\":\"s\",\"episode\":\"e" << i
             << "\",\"difficulty\":\"medium\",\"position_tag\":\"p" << i
             << "\",\"object_count\":5}\n";
    }
    meta.close();
    floc::style::save_features(feats, (data.path / "feats.txt").string());

    std::string log;
    CHECK(run("cluster --features " + (data.path / "feats.txt").string() + " --meta " +
                  (data.path / "meta.jsonl").string() + " --lambda 0 --knn 3 --out " +
                  out.str(),
              &log) == 0);
    CHECK(log.find("clusters: 2") != std::string::npos);

    nlohmann::json rep = nlohmann::json::parse(slurp(out.path / "cluster_report.json"));
    CHECK(rep["k"].get<int>() == 2);
    CHECK(rep["cluster_sizes"].size() == 2);
    CHECK(rep["n_images"].get<int>() == 8);

    auto labels = slurp(out.path / "labels.csv");
    CHECK(labels.find("img0,") != std::string::npos);
    CHECK(labels.find("img7,") != std::string::npos);
}

TEST_CASE("cluster on a single image reports one cluster with zero loss") {
    TempDir data("clitest_one_data"), out("clitest_one_out");
    std::ofstream meta(data.path / "meta.jsonl");
    meta << "{\"image_id\":\"only\",\"scene\":\"s\",\"episode\":\"e\","
            "\"difficulty\":\"easy\",\"position_tag\":\"p\",\"object_count\":3}\n";
    meta.close();
    floc::style::save_features({{"only", {1.0, 0.0}}}, (data.path / "feats.txt").string());
    CHECK(run("cluster --features " + (data.path / "feats.txt").string() + " --meta " +
              (data.path / "meta.jsonl").string() + " --knn 1 --out " + out.str()) == 0);
    nlohmann::json rep = nlohmann::json::parse(slurp(out.path / "cluster_report.json"));
    CHECK(rep["k"].get<int>() == 1);
    CHECK(rep["loss_contrastive"].get<double>() == 0.0);
}

TEST_CASE("evaluate writes a report from pose csv files") {
    TempDir data("clitest_eval_data"), out("clitest_eval_out");
    {
        std::ofstream pred(data.path / "pred.csv");
        pred << "step,x_m,y_m,theta_rad\n0,1.0,1.0,0.0\n1,2.05,1.0,0.0\n";
        std::ofstream truth(data.path / "truth.csv");
        truth << "step,x_m,y_m,theta_rad\n0,1.0,1.0,0.0\n1,2.0,1.0,0.0\n";
    }
    std::string log;
    CHECK(run("evaluate --traj " + (data.path / "pred.csv").string() + " --truth " +
                  (data.path / "truth.csv").string() + " --out " + out.str(),
              &log) == 0);
    REQUIRE(fs::exists(out.path / "report.json"));
    nlohmann::json rep = nlohmann::json::parse(slurp(out.path / "report.json"));
    CHECK(rep.contains("config"));
    CHECK(rep.contains("per_run"));
    CHECK(rep["aggregate"]["r_1m_30"].get<double>() == doctest::Approx(100.0));
    CHECK(log.find("RMSE") != std::string::npos);
}

TEST_CASE("missing input file exits nonzero with a single-line error") {
    std::string log;
    int rc = run("localize --floorplan does_not_exist.txt --scans nope.jsonl --out clitest_x",
                 &log);
    CHECK(rc == 3);
    CHECK(log.find("error:") != std::string::npos);
    fs::remove_all("clitest_x");
}
