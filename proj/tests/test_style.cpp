#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <random>

#include "floc/style.hpp"

using namespace floc::style;

namespace {

EpisodeMeta meta(const std::string& id, const std::string& scene, const std::string& episode,
                 Difficulty d, const std::string& pos, int objects = 5) {
    return {id, scene, episode, d, pos, objects};
}

std::vector<double> unit_vec(std::vector<double> v) {
    double n = 0.0;
    for (double x : v) n += x * x;
    n = std::sqrt(n);
    for (double& x : v) x /= n;
    return v;
}

}  // namespace

TEST_CASE("build_constraints applies rules 1-4 with precedence") {
    std::vector<EpisodeMeta> metas = {
        meta("a", "s1", "e1", Difficulty::Easy, "p1"),
        meta("b", "s2", "e1", Difficulty::Easy, "p1"),   // other scene
        meta("c", "s1", "e2", Difficulty::Hard, "p2"),
        meta("d", "s1", "e2", Difficulty::Hard, "p3"),   // same hard episode as c
        meta("e", "s1", "e3", Difficulty::Easy, "p4"),
        meta("f", "s1", "e3", Difficulty::Easy, "p4"),   // same position as e
    };
    auto m = build_constraints(metas);

    CHECK(m.at(0, 1) == -1.0);  // different scenes, despite same episode/position
    CHECK(m.at(4, 5) == 1.0);   // same position
    CHECK(m.at(2, 3) == -0.5);  // same hard episode
    CHECK(m.at(4, 5) == 1.0);
    CHECK(m.at(0, 2) == 0.0);   // same scene, different episodes: unconstrained
    for (int i = 0; i < m.n; ++i) {
        CHECK(m.at(i, i) == 1.0);
        for (int j = 0; j < m.n; ++j) CHECK(m.at(i, j) == m.at(j, i));
    }
}

TEST_CASE("build_constraints rule 3 marks easy same-episode pairs") {
    std::vector<EpisodeMeta> metas = {
        meta("a", "s1", "e1", Difficulty::Easy, "p1"),
        meta("b", "s1", "e1", Difficulty::Easy, "p2"),
        meta("c", "s1", "e1", Difficulty::Medium, "p3"),
    };
    auto m = build_constraints(metas);
    CHECK(m.at(0, 1) == 0.5);
    CHECK(m.at(0, 2) == 0.0);  // medium pairs carry no constraint
}

TEST_CASE("build_constraints rejects duplicate ids") {
    std::vector<EpisodeMeta> metas = {
        meta("a", "s1", "e1", Difficulty::Easy, "p1"),
        meta("a", "s1", "e2", Difficulty::Hard, "p2"),
    };
    CHECK_THROWS_AS(build_constraints(metas), DuplicateId);
}

TEST_CASE("distance_matrix basics") {
    std::vector<FeatureRecord> feats = {
        {"a", {1.0, 0.0}},
        {"b", {1.0, 0.0}},
        {"c", {0.0, 1.0}},
        {"d", {-1.0, 0.0}},
    };
    auto d = distance_matrix(feats);
    CHECK(d.at(0, 1) == doctest::Approx(0.0));
    CHECK(d.at(0, 2) == doctest::Approx(1.0));
    CHECK(d.at(0, 3) == doctest::Approx(2.0));
    CHECK(d.at(0, 0) == 0.0);
}

TEST_CASE("distance_matrix matches a per-pair recomputation") {
    std::mt19937_64 rng(77);
    std::normal_distribution<double> gauss;
    std::vector<FeatureRecord> feats;
    for (int i = 0; i < 12; ++i) {
        std::vector<double> v(6);
        for (double& x : v) x = gauss(rng);
        feats.push_back({"img" + std::to_string(i), unit_vec(v)});
    }
    auto d = distance_matrix(feats);
    for (int i = 0; i < 12; ++i)
        for (int j = 0; j < 12; ++j) {
            long double dot = 0.0L, ni = 0.0L, nj = 0.0L;
            for (int k = 0; k < 6; ++k) {
                dot += (long double)feats[i].vector[k] * feats[j].vector[k];
                ni += (long double)feats[i].vector[k] * feats[i].vector[k];
                nj += (long double)feats[j].vector[k] * feats[j].vector[k];
            }
            long double expect = i == j ? 0.0L : 1.0L - dot / (sqrtl(ni) * sqrtl(nj));
            CHECK(d.at(i, j) == doctest::Approx((double)expect).epsilon(1e-12));
            CHECK(d.at(i, j) >= 0.0);
            CHECK(d.at(i, j) <= 2.0 + 1e-12);
        }
}

TEST_CASE("distance_matrix rejects zero vectors") {
    std::vector<FeatureRecord> feats = {{"a", {0.0, 0.0}}};
    CHECK_THROWS_AS(distance_matrix(feats), ZeroVector);
}

TEST_CASE("refine arithmetic and linearity in lambda") {
    Matrix d(2), m(2);
    d.at(0, 1) = d.at(1, 0) = 0.4;
    m.at(0, 0) = m.at(1, 1) = 1.0;
    m.at(0, 1) = m.at(1, 0) = 1.0;
    auto r = refine(d, m, 0.2);
    CHECK(r.at(0, 1) == doctest::Approx(0.2));

    CHECK(refine(d, m, 0.0).data == d.data);

    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        int n = 5;
        Matrix dd(n), mm(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                dd.at(i, j) = unit(rng);
                mm.at(i, j) = unit(rng) - 0.5;
            }
        double a = unit(rng), b = unit(rng);
        auto lhs = refine(dd, mm, a + b);
        auto rhs = refine(refine(dd, mm, a), mm, b);
        for (std::size_t k = 0; k < lhs.data.size(); ++k)
            CHECK(lhs.data[k] == doctest::Approx(rhs.data[k]).epsilon(1e-12));
    }
}

TEST_CASE("refine shape mismatch") {
    CHECK_THROWS_AS(refine(Matrix(2), Matrix(3), 0.1), ShapeMismatch);
}

TEST_CASE("filter_blank keeps counts at or above the threshold, in order") {
    std::vector<EpisodeMeta> metas = {
        meta("a", "s", "e", Difficulty::Easy, "p", 1),
        meta("b", "s", "e", Difficulty::Easy, "p2", 5),
        meta("c", "s", "e", Difficulty::Easy, "p3", 9),
    };
    CHECK(filter_blank(metas, 0) == std::vector<std::string>{"a", "b", "c"});
    CHECK(filter_blank(metas, 5) == std::vector<std::string>{"b", "c"});
    CHECK(filter_blank(metas, 100).empty());
}

TEST_CASE("compute_centroids normalizes cluster means") {
    std::vector<FeatureRecord> feats = {
        {"a", {1.0, 0.0}},
        {"b", {0.0, 1.0}},
        {"c", {0.0, -1.0}},
    };
    std::vector<int> labels = {0, 0, 1};
    auto cents = compute_centroids(feats, labels);
    REQUIRE(cents.size() == 2);
    double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(cents[0][0] == doctest::Approx(inv_sqrt2));
    CHECK(cents[0][1] == doctest::Approx(inv_sqrt2));
    CHECK(cents[1][1] == doctest::Approx(-1.0));
}

TEST_CASE("compute_centroids singleton cluster returns the vector itself") {
    std::vector<FeatureRecord> feats = {{"a", unit_vec({0.3, 0.4, 0.5})}};
    auto cents = compute_centroids(feats, {0});
    for (std::size_t i = 0; i < 3; ++i)
        CHECK(cents[0][i] == doctest::Approx(feats[0].vector[i]));
}

TEST_CASE("compute_centroids underflows on antipodal members") {
    std::vector<FeatureRecord> feats = {{"a", {1.0, 0.0}}, {"b", {-1.0, 0.0}}};
    CHECK_THROWS_AS(compute_centroids(feats, {0, 0}), NormalizationUnderflow);
}

TEST_CASE("compute_centroids rejects empty clusters") {
    std::vector<FeatureRecord> feats = {{"a", {1.0, 0.0}}};
    CHECK_THROWS_AS(compute_centroids(feats, {1}), EmptyCluster);
}

TEST_CASE("compute_centroids matches a direct recomputation") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> gauss;
    std::vector<FeatureRecord> feats;
    std::vector<int> labels;
    for (int i = 0; i < 20; ++i) {
        std::vector<double> v(5);
        for (double& x : v) x = gauss(rng);
        feats.push_back({"x" + std::to_string(i), unit_vec(v)});
        labels.push_back(i % 3);
    }
    auto cents = compute_centroids(feats, labels);
    for (int l = 0; l < 3; ++l) {
        std::vector<double> mean(5, 0.0);
        int count = 0;
        for (int i = 0; i < 20; ++i)
            if (labels[i] == l) {
                for (int k = 0; k < 5; ++k) mean[k] += feats[i].vector[k];
                ++count;
            }
        for (double& x : mean) x /= count;
        auto expect = unit_vec(mean);
        for (int k = 0; k < 5; ++k)
            CHECK(cents[l][k] == doctest::Approx(expect[k]).epsilon(1e-12));
    }
}

TEST_CASE("contrastive_loss equals ln K at uniform logits") {
    // All centroids orthogonal to the feature: every dot product is 0.
    std::vector<double> f = {1.0, 0.0, 0.0};
    std::vector<std::vector<double>> cents = {
        {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}, {0.0, -1.0, 0.0}, {0.0, 0.0, -1.0}};
    auto r = contrastive_loss(f, 1, cents, 0.07);
    CHECK(r.loss == doctest::Approx(std::log(4.0)).epsilon(1e-12));
}

TEST_CASE("contrastive_loss with one cluster is zero") {
    std::vector<double> f = {1.0, 0.0};
    auto r = contrastive_loss(f, 0, {{0.6, 0.8}}, 0.07);
    CHECK(r.loss == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("contrastive_loss two-class direct value") {
    // f.phi+ = 1, f.phi- = 0, tau = 1 -> ln(1 + e^-1)
    std::vector<double> f = {1.0, 0.0};
    auto r = contrastive_loss(f, 0, {{1.0, 0.0}, {0.0, 1.0}}, 1.0);
    CHECK(r.loss == doctest::Approx(std::log(1.0 + std::exp(-1.0))).epsilon(1e-9));
    CHECK(r.loss == doctest::Approx(0.31326).epsilon(1e-4));
}

TEST_CASE("contrastive_loss gradient matches finite differences") {
    std::mt19937_64 rng(15);
    std::normal_distribution<double> gauss;
    const double h = 1e-6;
    for (int trial = 0; trial < 25; ++trial) {
        int d = 6, k = 4;
        std::vector<std::vector<double>> cents;
        for (int c = 0; c < k; ++c) {
            std::vector<double> v(d);
            for (double& x : v) x = gauss(rng);
            cents.push_back(unit_vec(v));
        }
        std::vector<double> f(d);
        for (double& x : f) x = gauss(rng);
        f = unit_vec(f);
        auto r = contrastive_loss(f, trial % k, cents, 0.2);
        for (int i = 0; i < d; ++i) {
            auto plus = f, minus = f;
            plus[i] += h;
            minus[i] -= h;
            double fd = (contrastive_loss(plus, trial % k, cents, 0.2).loss -
                         contrastive_loss(minus, trial % k, cents, 0.2).loss) /
                        (2 * h);
            CHECK(r.grad[i] == doctest::Approx(fd).epsilon(1e-5));
        }
    }
}

TEST_CASE("contrastive_loss decreasing the positive logit increases the loss") {
    std::vector<std::vector<double>> cents = {{1.0, 0.0}, {0.0, 1.0}};
    auto near = contrastive_loss(unit_vec({0.9, 0.1}), 0, cents, 0.1);
    auto far = contrastive_loss(unit_vec({0.5, 0.5}), 0, cents, 0.1);
    CHECK(near.loss < far.loss);
    CHECK(near.loss >= 0.0);
}

TEST_CASE("contrastive_loss bad label") {
    CHECK_THROWS_AS(contrastive_loss({1.0}, 2, {{1.0}}, 0.1), BadLabel);
}

TEST_CASE("style_pair_loss values") {
    auto confident = style_pair_loss({1.0 - 1e-12}, {1});
    CHECK(confident.loss == doctest::Approx(0.0).epsilon(1e-9));

    auto coin = style_pair_loss({0.5, 0.5, 0.5}, {1, 0, 1});
    CHECK(coin.loss == doctest::Approx(3.0 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("style_pair_loss gradient matches finite differences") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> unit(0.05, 0.95);
    const double h = 1e-7;
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<double> probs(8);
        std::vector<int> labels(8);
        for (int i = 0; i < 8; ++i) {
            probs[i] = unit(rng);
            labels[i] = (trial + i) % 2;
        }
        auto r = style_pair_loss(probs, labels);
        for (int i = 0; i < 8; ++i) {
            auto plus = probs, minus = probs;
            plus[i] += h;
            minus[i] -= h;
            double fd =
                (style_pair_loss(plus, labels).loss - style_pair_loss(minus, labels).loss) /
                (2 * h);
            CHECK(r.grad[i] == doctest::Approx(fd).epsilon(1e-6));
        }
    }
}

TEST_CASE("style_pair_loss length mismatch") {
    CHECK_THROWS_AS(style_pair_loss({0.5}, {1, 0}), LengthMismatch);
}

TEST_CASE("total_loss balance") {
    CHECK(total_loss(0.5, 0.25, 1.0) == doctest::Approx(0.75));
    CHECK(total_loss(0.5, 0.25, 0.0) == doctest::Approx(0.5));
    CHECK(total_loss(0.7, 0.0, 3.0) == doctest::Approx(0.7));
    CHECK_THROWS_AS(total_loss(0.1, 0.1, -1.0), floc::ValidationError);
}

TEST_CASE("metadata jsonl and feature file round trips") {
    std::vector<EpisodeMeta> metas = {
        meta("img0", "sceneA", "ep1", Difficulty::Easy, "pos1", 3),
        meta("img1", "sceneB", "ep2", Difficulty::Hard, "pos2", 8),
    };
    std::string mpath = "test_style_meta.jsonl";
    {
        std::FILE* f = std::fopen(mpath.c_str(), "w");
        for (const auto& m : metas)
            std::fprintf(f,
                         "{\"image_id\":\"%s\",\"scene\":\"%s\",\"episode\":\"%s\","
                         "\"difficulty\":\"%s\",\"position_tag\":\"%s\",\"object_count\":%d}\n",
                         m.image_id.c_str(), m.scene.c_str(), m.episode.c_str(),
                         to_string(m.difficulty).c_str(), m.position_tag.c_str(),
                         m.object_count);
        std::fclose(f);
    }
    auto loaded = load_metadata(mpath);
    REQUIRE(loaded.size() == 2);
    CHECK(loaded[1].scene == "sceneB");
    CHECK(loaded[1].difficulty == Difficulty::Hard);
    CHECK(loaded[1].object_count == 8);
    std::remove(mpath.c_str());

    std::vector<FeatureRecord> feats = {
        {"img0", unit_vec({0.1, 0.2, 0.3})},
        {"img1", unit_vec({-0.5, 0.4, 0.1})},
    };
    for (bool binary : {false, true}) {
        std::string fpath = "test_style_feats.dat";
        save_features(feats, fpath, binary);
        auto fl = load_features(fpath);
        REQUIRE(fl.size() == 2);
        CHECK(fl[0].image_id == "img0");
        for (int i = 0; i < 3; ++i)
            CHECK(fl[1].vector[i] ==
                  doctest::Approx(feats[1].vector[i]).epsilon(binary ? 1e-6 : 1e-15));
        std::remove(fpath.c_str());
        std::remove((fpath + ".ids").c_str());
    }
}
