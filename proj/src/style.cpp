#include "floc/style.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

namespace floc::style {

Difficulty parse_difficulty(const std::string& s) {
    if (s == "easy") return Difficulty::Easy;
    if (s == "medium") return Difficulty::Medium;
    if (s == "hard") return Difficulty::Hard;
    throw ParseError("unknown difficulty: " + s);
}

std::string to_string(Difficulty d) {
    switch (d) {
        case Difficulty::Easy: return "easy";
        case Difficulty::Medium: return "medium";
        default: return "hard";
    }
}

Matrix build_constraints(const std::vector<EpisodeMeta>& metas) {
    const int n = static_cast<int>(metas.size());
    std::unordered_set<std::string> seen;
    for (const auto& m : metas)
        if (!seen.insert(m.image_id).second)
            throw DuplicateId("duplicate image_id: " + m.image_id);

    Matrix out(n, 0.0);
    for (int i = 0; i < n; ++i) {
        out.at(i, i) = 1.0;  // an image is in its own room
        for (int j = i + 1; j < n; ++j) {
            const auto& a = metas[i];
            const auto& b = metas[j];
            double v = 0.0;
            // Rules in precedence order; the first match wins.
            if (a.scene != b.scene)
                v = -1.0;
            else if (a.position_tag == b.position_tag)
                v = 1.0;
            else if (a.episode == b.episode && a.difficulty == Difficulty::Easy &&
                     b.difficulty == Difficulty::Easy)
                v = 0.5;
            else if (a.episode == b.episode && a.difficulty == Difficulty::Hard &&
                     b.difficulty == Difficulty::Hard)
                v = -0.5;
            out.at(i, j) = v;
            out.at(j, i) = v;
        }
    }
    return out;
}

Matrix distance_matrix(const std::vector<FeatureRecord>& features) {
    const int n = static_cast<int>(features.size());
    std::vector<double> norms(n);
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (double v : features[i].vector) s += v * v;
        norms[i] = std::sqrt(s);
        if (!(norms[i] > 0.0))
            throw ZeroVector("zero feature vector for " + features[i].image_id);
        if (i > 0 && features[i].vector.size() != features[0].vector.size())
            throw ShapeMismatch("feature dimensions differ");
    }

    Matrix out(n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double dot = 0.0;
            for (std::size_t k = 0; k < features[i].vector.size(); ++k)
                dot += features[i].vector[k] * features[j].vector[k];
            double d = 1.0 - dot / (norms[i] * norms[j]);
            out.at(i, j) = d;
            out.at(j, i) = d;
        }
    return out;
}

Matrix refine(const Matrix& distances, const Matrix& constraints, double lambda) {
    if (distances.n != constraints.n)
        throw ShapeMismatch("refine: matrix sizes differ");
    Matrix out(distances.n);
    for (std::size_t i = 0; i < out.data.size(); ++i)
        out.data[i] = distances.data[i] - lambda * constraints.data[i];
    return out;
}

std::vector<std::string> filter_blank(const std::vector<EpisodeMeta>& metas, int threshold) {
    if (threshold < 0) throw ValidationError("filter_blank: threshold must be >= 0");
    std::vector<std::string> kept;
    for (const auto& m : metas)
        if (m.object_count >= threshold) kept.push_back(m.image_id);
    return kept;
}

// --- InfoMap ------------------------------------------------------------

SimilarityGraph build_similarity_graph(const Matrix& refined, int knn) {
    if (refined.n < 1) throw EmptyGraph("similarity graph has no nodes");
    if (knn < 1) throw ValidationError("knn must be >= 1");

    const int n = refined.n;
    auto sim = [&](int i, int j) { return std::clamp(1.0 - refined.at(i, j), 0.0, 1.0); };

    // k nearest neighbors per node by similarity, ties to the lower index.
    std::vector<std::unordered_set<int>> nearest(n);
    for (int i = 0; i < n; ++i) {
        std::vector<int> order;
        for (int j = 0; j < n; ++j)
            if (j != i && sim(i, j) > 0.0) order.push_back(j);
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return sim(i, a) > sim(i, b); });
        if (static_cast<int>(order.size()) > knn) order.resize(knn);
        nearest[i].insert(order.begin(), order.end());
    }

    SimilarityGraph g;
    g.n = n;
    for (int i = 0; i < n; ++i)
        for (int j : nearest[i])
            if (j > i && nearest[j].count(i)) g.edges.push_back({i, j, sim(i, j)});
    return g;
}

namespace {

inline double plogp(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

// Flow quantities shared by the map-equation evaluation and the greedy
// search: PageRank visit rates p_i and per-link flows
// f_ij = (1 - teleport) * p_i * w_ij / strength_i.
struct Flow {
    int n = 0;
    double teleport = 0.15;
    std::vector<double> visit;                       // p_i, sums to 1
    std::vector<double> strength;                    // sum of incident weights
    std::vector<std::vector<std::pair<int, double>>> adj;  // neighbor, weight
    std::vector<double> out_flow;                    // sum_j f_ij
    double node_term = 0.0;                          // -sum_i plogp(p_i)

    bool dangling(int i) const { return strength[i] <= 0.0; }
};

Flow compute_flow(const SimilarityGraph& graph, double teleport) {
    Flow fl;
    fl.n = graph.n;
    fl.teleport = teleport;
    fl.adj.resize(graph.n);
    fl.strength.assign(graph.n, 0.0);
    for (const auto& e : graph.edges) {
        if (e.weight <= 0.0) continue;
        fl.adj[e.a].push_back({e.b, e.weight});
        fl.adj[e.b].push_back({e.a, e.weight});
        fl.strength[e.a] += e.weight;
        fl.strength[e.b] += e.weight;
    }

    // PageRank with uniform teleportation; dangling rows are uniform.
    const int n = graph.n;
    std::vector<double> p(n, 1.0 / n), next(n);
    for (int iter = 0; iter < 10000; ++iter) {
        double dangling_mass = 0.0;
        for (int i = 0; i < n; ++i)
            if (fl.dangling(i)) dangling_mass += p[i];
        double base = (teleport * (1.0 - dangling_mass) + dangling_mass) / n;
        std::fill(next.begin(), next.end(), base);
        for (int i = 0; i < n; ++i) {
            if (fl.dangling(i)) continue;
            double scale = (1.0 - teleport) * p[i] / fl.strength[i];
            for (const auto& [j, w] : fl.adj[i]) next[j] += scale * w;
        }
        double delta = 0.0;
        for (int i = 0; i < n; ++i) delta += std::abs(next[i] - p[i]);
        p.swap(next);
        if (delta < 1e-15) break;
    }
    fl.visit = std::move(p);

    fl.out_flow.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        if (fl.dangling(i)) continue;
        fl.out_flow[i] = (1.0 - teleport) * fl.visit[i];
    }
    for (int i = 0; i < n; ++i) fl.node_term -= plogp(fl.visit[i]);
    return fl;
}

inline double pair_flow(const Flow& fl, int i, int j, double w) {
    // f_ij + f_ji for an undirected edge of weight w.
    double f = 0.0;
    if (!fl.dangling(i)) f += (1.0 - fl.teleport) * fl.visit[i] * w / fl.strength[i];
    if (!fl.dangling(j)) f += (1.0 - fl.teleport) * fl.visit[j] * w / fl.strength[j];
    return f;
}

// Per-module statistics sufficient to evaluate exit flows.
struct ModuleStats {
    int count = 0;          // nodes in the module
    double visit = 0.0;     // sum of p_i
    double dangling = 0.0;  // sum of p_i over dangling members
    double out = 0.0;       // sum of out_flow over members
    double internal = 0.0;  // sum of (f_ij + f_ji) over internal edges
};

double exit_flow(const Flow& fl, const ModuleStats& m) {
    double outside = static_cast<double>(fl.n - m.count) / fl.n;
    double tele = fl.teleport * (m.visit - m.dangling) * outside + m.dangling * outside;
    return tele + m.out - m.internal;
}

// L = plogp(q) - 2 sum plogp(q_m) + sum plogp(q_m + P_m) - sum plogp(p_i)
double level_terms(const std::vector<ModuleStats>& mods, const Flow& fl) {
    double q = 0.0, sum_q_terms = 0.0, sum_qp_terms = 0.0;
    for (const auto& m : mods) {
        if (m.count == 0) continue;
        double qm = exit_flow(fl, m);
        q += qm;
        sum_q_terms += plogp(qm);
        sum_qp_terms += plogp(qm + m.visit);
    }
    return plogp(q) - 2.0 * sum_q_terms + sum_qp_terms + fl.node_term;
}

std::vector<ModuleStats> collect_stats(const Flow& fl, const std::vector<int>& labels,
                                       int num_modules) {
    std::vector<ModuleStats> mods(num_modules);
    for (int i = 0; i < fl.n; ++i) {
        auto& m = mods[labels[i]];
        m.count += 1;
        m.visit += fl.visit[i];
        if (fl.dangling(i)) m.dangling += fl.visit[i];
        m.out += fl.out_flow[i];
    }
    for (int i = 0; i < fl.n; ++i)
        for (const auto& [j, w] : fl.adj[i])
            if (j > i && labels[i] == labels[j])
                mods[labels[i]].internal += pair_flow(fl, i, j, w);
    return mods;
}

ModuleStats without_node(const Flow& fl, const ModuleStats& m, int v, double conn_v) {
    ModuleStats r = m;
    r.count -= 1;
    r.visit -= fl.visit[v];
    if (fl.dangling(v)) r.dangling -= fl.visit[v];
    r.out -= fl.out_flow[v];
    r.internal -= conn_v;
    return r;
}

ModuleStats with_node(const Flow& fl, const ModuleStats& m, int v, double conn_v) {
    ModuleStats r = m;
    r.count += 1;
    r.visit += fl.visit[v];
    if (fl.dangling(v)) r.dangling += fl.visit[v];
    r.out += fl.out_flow[v];
    r.internal += conn_v;
    return r;
}

double module_terms(const Flow& fl, const ModuleStats& m, double* q_out) {
    if (m.count == 0) {
        *q_out = 0.0;
        return 0.0;
    }
    double q = exit_flow(fl, m);
    *q_out = q;
    return -2.0 * plogp(q) + plogp(q + m.visit);
}

// One sweep of single-node moves in the given order. A node may move to
// any module it shares flow with, or escape into an empty module.
bool move_pass(const Flow& fl, std::vector<int>& labels, std::vector<ModuleStats>& mods,
               const std::vector<int>& order, double& q_total) {
    bool improved = false;
    std::unordered_map<int, double> conn;  // module -> f between v and module
    for (int v : order) {
        const int a = labels[v];
        conn.clear();
        for (const auto& [j, w] : fl.adj[v]) conn[labels[j]] += pair_flow(fl, v, j, w);
        const double conn_a = conn.count(a) ? conn[a] : 0.0;

        double q_a_old = 0.0, q_a_new = 0.0;
        const double terms_a_old = module_terms(fl, mods[a], &q_a_old);
        const ModuleStats a_without = without_node(fl, mods[a], v, conn_a);
        const double terms_a_new = module_terms(fl, a_without, &q_a_new);

        int best_b = a;
        double best_delta = 0.0, best_q_total = q_total;

        auto try_target = [&](int b, double conn_b) {
            if (b == a) return;
            double q_b_old = 0.0, q_b_new = 0.0;
            double terms_b_old = module_terms(fl, mods[b], &q_b_old);
            ModuleStats b_with = with_node(fl, mods[b], v, conn_b);
            double terms_b_new = module_terms(fl, b_with, &q_b_new);

            double q_new = q_total - q_a_old - q_b_old + q_a_new + q_b_new;
            double delta = (terms_a_new - terms_a_old) + (terms_b_new - terms_b_old) +
                           plogp(q_new) - plogp(q_total);
            if (delta < best_delta - 1e-15) {
                best_delta = delta;
                best_b = b;
                best_q_total = q_new;
            }
        };

        for (const auto& [b, cw] : conn) try_target(b, cw);
        if (mods[a].count > 1) {
            int free_slot = -1;
            for (int m = 0; m < static_cast<int>(mods.size()); ++m)
                if (mods[m].count == 0) {
                    free_slot = m;
                    break;
                }
            if (free_slot < 0) {
                mods.push_back({});
                free_slot = static_cast<int>(mods.size()) - 1;
            }
            try_target(free_slot, 0.0);
        }

        if (best_b != a && best_delta < -1e-12) {
            double conn_b = conn.count(best_b) ? conn[best_b] : 0.0;
            mods[a] = a_without;
            mods[best_b] = with_node(fl, mods[best_b], v, conn_b);
            labels[v] = best_b;
            q_total = best_q_total;
            improved = true;
        }
    }
    return improved;
}

// Tries merging whole modules along inter-module flow, best single merge
// per call. Plays the role of the aggregation level of the search.
bool merge_pass(const Flow& fl, std::vector<int>& labels, std::vector<ModuleStats>& mods,
                double& q_total) {
    std::map<std::pair<int, int>, double> conn;
    for (int i = 0; i < fl.n; ++i)
        for (const auto& [j, w] : fl.adj[i]) {
            if (j <= i) continue;
            int a = labels[i], b = labels[j];
            if (a == b) continue;
            conn[{std::min(a, b), std::max(a, b)}] += pair_flow(fl, i, j, w);
        }

    int best_a = -1, best_b = -1;
    double best_delta = 0.0, best_q_total = q_total;
    for (const auto& [pair, flow_ab] : conn) {
        auto [a, b] = pair;
        double q_a = 0.0, q_b = 0.0, q_m = 0.0;
        double terms_a = module_terms(fl, mods[a], &q_a);
        double terms_b = module_terms(fl, mods[b], &q_b);
        ModuleStats merged = mods[a];
        merged.count += mods[b].count;
        merged.visit += mods[b].visit;
        merged.dangling += mods[b].dangling;
        merged.out += mods[b].out;
        merged.internal += mods[b].internal + flow_ab;
        double terms_m = module_terms(fl, merged, &q_m);

        double q_new = q_total - q_a - q_b + q_m;
        double delta = terms_m - terms_a - terms_b + plogp(q_new) - plogp(q_total);
        if (delta < best_delta - 1e-15) {
            best_delta = delta;
            best_a = a;
            best_b = b;
            best_q_total = q_new;
        }
    }

    if (best_a < 0 || best_delta >= -1e-12) return false;
    double flow_ab = conn[{best_a, best_b}];
    ModuleStats merged = mods[best_a];
    merged.count += mods[best_b].count;
    merged.visit += mods[best_b].visit;
    merged.dangling += mods[best_b].dangling;
    merged.out += mods[best_b].out;
    merged.internal += mods[best_b].internal + flow_ab;
    mods[best_a] = merged;
    mods[best_b] = ModuleStats{};
    for (int& l : labels)
        if (l == best_b) l = best_a;
    q_total = best_q_total;
    return true;
}

double total_exit(const Flow& fl, const std::vector<ModuleStats>& mods) {
    double q = 0.0;
    for (const auto& m : mods)
        if (m.count > 0) q += exit_flow(fl, m);
    return q;
}

}  // namespace

double map_equation(const SimilarityGraph& graph, const std::vector<int>& labels,
                    double teleport) {
    if (graph.n < 1) throw EmptyGraph("map_equation: empty graph");
    if (static_cast<int>(labels.size()) != graph.n)
        throw LengthMismatch("map_equation: label count does not match node count");
    int k = *std::max_element(labels.begin(), labels.end()) + 1;
    Flow fl = compute_flow(graph, teleport);
    auto mods = collect_stats(fl, labels, k);
    return level_terms(mods, fl);
}

std::vector<int> infomap_partition(const SimilarityGraph& graph, double teleport,
                                   std::uint64_t seed) {
    if (graph.n < 1) throw EmptyGraph("infomap_partition: empty graph");
    if (!(teleport > 0.0 && teleport < 1.0))
        throw ValidationError("teleport must be in (0, 1)");

    Flow fl = compute_flow(graph, teleport);
    const int n = graph.n;

    std::vector<int> best_labels(n);
    std::iota(best_labels.begin(), best_labels.end(), 0);
    double best_value = level_terms(collect_stats(fl, best_labels, n), fl);

    constexpr int kRestarts = 8;
    for (int restart = 0; restart < kRestarts; ++restart) {
        std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ull + restart);
        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);

        std::vector<int> labels(n);
        std::iota(labels.begin(), labels.end(), 0);
        auto mods = collect_stats(fl, labels, n);
        double q_total = total_exit(fl, mods);

        for (int round = 0; round < 200; ++round) {
            bool moved = move_pass(fl, labels, mods, order, q_total);
            bool merged = merge_pass(fl, labels, mods, q_total);
            if (!moved && !merged) break;
            q_total = total_exit(fl, mods);  // shed incremental drift
        }

        double value = level_terms(mods, fl);
        if (value < best_value - 1e-12) {
            best_value = value;
            best_labels = labels;
        }
    }

    // The trivial partitions are always admissible answers.
    std::vector<int> one_module(n, 0);
    double one_value = level_terms(collect_stats(fl, one_module, 1), fl);
    if (one_value < best_value - 1e-12) {
        best_value = one_value;
        best_labels = one_module;
    }

    // Relabel contiguously from 0 in first-appearance order.
    std::unordered_map<int, int> remap;
    for (int& l : best_labels) {
        auto it = remap.find(l);
        if (it == remap.end()) it = remap.emplace(l, static_cast<int>(remap.size())).first;
        l = it->second;
    }
    return best_labels;
}

std::vector<int> infomap_cluster(const Matrix& refined, int knn, double teleport,
                                 std::uint64_t seed) {
    return infomap_partition(build_similarity_graph(refined, knn), teleport, seed);
}

// --- Centroids and losses -----------------------------------------------

std::vector<std::vector<double>> compute_centroids(const std::vector<FeatureRecord>& features,
                                                   const std::vector<int>& labels) {
    if (features.size() != labels.size())
        throw LengthMismatch("compute_centroids: features/labels length mismatch");
    if (features.empty()) throw EmptyCluster("compute_centroids: no features");
    const int k = *std::max_element(labels.begin(), labels.end()) + 1;
    const std::size_t d = features[0].vector.size();

    std::vector<std::vector<double>> centroids(k, std::vector<double>(d, 0.0));
    std::vector<int> counts(k, 0);
    for (std::size_t i = 0; i < features.size(); ++i) {
        int l = labels[i];
        if (l < 0) throw BadLabel("negative label");
        counts[l] += 1;
        for (std::size_t j = 0; j < d; ++j) centroids[l][j] += features[i].vector[j];
    }
    for (int l = 0; l < k; ++l) {
        if (counts[l] == 0) throw EmptyCluster("cluster " + std::to_string(l) + " is empty");
        double norm = 0.0;
        for (double v : centroids[l]) norm += v * v;
        norm = std::sqrt(norm) / counts[l];  // norm of the mean
        if (norm < 1e-12)
            throw NormalizationUnderflow("cluster " + std::to_string(l) +
                                         " has a near-zero mean vector");
        for (double& v : centroids[l]) v /= counts[l] * norm;
    }
    return centroids;
}

ScalarGrad contrastive_loss(const std::vector<double>& feature, int positive_label,
                            const std::vector<std::vector<double>>& centroids, double tau) {
    const int k = static_cast<int>(centroids.size());
    if (k < 1) throw ValidationError("contrastive_loss: need at least one centroid");
    if (positive_label < 0 || positive_label >= k)
        throw BadLabel("contrastive_loss: label out of range");
    if (!(tau > 0.0)) throw ValidationError("contrastive_loss: tau must be positive");

    std::vector<double> logits(k);
    for (int c = 0; c < k; ++c) {
        double dot = 0.0;
        for (std::size_t j = 0; j < feature.size(); ++j) dot += feature[j] * centroids[c][j];
        logits[c] = dot / tau;
    }
    double zmax = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    std::vector<double> soft(k);
    for (int c = 0; c < k; ++c) {
        soft[c] = std::exp(logits[c] - zmax);
        sum += soft[c];
    }
    for (double& s : soft) s /= sum;

    ScalarGrad out;
    out.loss = -(logits[positive_label] - zmax) + std::log(sum);
    out.grad.assign(feature.size(), 0.0);
    for (int c = 0; c < k; ++c) {
        double coef = (soft[c] - (c == positive_label ? 1.0 : 0.0)) / tau;
        for (std::size_t j = 0; j < feature.size(); ++j) out.grad[j] += coef * centroids[c][j];
    }
    return out;
}

ScalarGrad style_pair_loss(const std::vector<double>& probs, const std::vector<int>& labels) {
    if (probs.size() != labels.size())
        throw LengthMismatch("style_pair_loss: probs/labels length mismatch");
    constexpr double kClamp = 1e-12;

    ScalarGrad out;
    out.grad.resize(probs.size());
    for (std::size_t i = 0; i < probs.size(); ++i) {
        double p = std::clamp(probs[i], kClamp, 1.0 - kClamp);
        double y = labels[i] ? 1.0 : 0.0;
        out.loss -= y * std::log(p) + (1.0 - y) * std::log(1.0 - p);
        out.grad[i] = -(y / p - (1.0 - y) / (1.0 - p));
    }
    return out;
}

double total_loss(double l_c, double l_pred, double gamma) {
    if (gamma < 0.0) throw ValidationError("total_loss: gamma must be >= 0");
    return l_c + gamma * l_pred;
}

// --- File I/O -----------------------------------------------------------

std::vector<EpisodeMeta> load_metadata(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open metadata file: " + path);
    std::vector<EpisodeMeta> metas;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
        EpisodeMeta m;
        m.image_id = j.at("image_id").get<std::string>();
        m.scene = j.at("scene").get<std::string>();
        m.episode = j.at("episode").get<std::string>();
        m.difficulty = parse_difficulty(j.at("difficulty").get<std::string>());
        m.position_tag = j.at("position_tag").get<std::string>();
        m.object_count = j.at("object_count").get<int>();
        if (m.object_count < 0)
            throw ParseError(path + ":" + std::to_string(lineno) + ": negative object_count");
        metas.push_back(std::move(m));
    }
    return metas;
}

std::vector<FeatureRecord> load_features(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open feature file: " + path);
    std::string magic, version;
    int n = 0, d = 0;
    if (!(in >> magic >> version >> n >> d) || magic != "FEATS")
        throw ParseError(path + ":1: malformed FEATS header");
    if (n < 0 || d < 1) throw ParseError(path + ":1: bad dimensions in FEATS header");

    std::vector<FeatureRecord> out;
    out.reserve(n);
    if (version == "v1") {
        for (int i = 0; i < n; ++i) {
            FeatureRecord r;
            if (!(in >> r.image_id)) throw ParseError(path + ": truncated feature rows");
            r.vector.resize(d);
            for (int j = 0; j < d; ++j)
                if (!(in >> r.vector[j]))
                    throw ParseError(path + ": truncated feature row for " + r.image_id);
            out.push_back(std::move(r));
        }
    } else if (version == "v1b") {
        in.get();  // newline before payload
        std::ifstream ids(path + ".ids");
        if (!ids) throw IoError("binary features need an id sidecar: " + path + ".ids");
        std::vector<float> buf(static_cast<std::size_t>(n) * d);
        in.read(reinterpret_cast<char*>(buf.data()),
                static_cast<std::streamsize>(buf.size() * sizeof(float)));
        if (in.gcount() != static_cast<std::streamsize>(buf.size() * sizeof(float)))
            throw ParseError(path + ": truncated float32 payload");
        std::string id;
        for (int i = 0; i < n; ++i) {
            if (!std::getline(ids, id)) throw ParseError(path + ".ids: too few ids");
            FeatureRecord r;
            r.image_id = id;
            r.vector.assign(buf.begin() + static_cast<std::size_t>(i) * d,
                            buf.begin() + static_cast<std::size_t>(i + 1) * d);
            out.push_back(std::move(r));
        }
    } else {
        throw ParseError(path + ":1: unknown FEATS version " + version);
    }
    return out;
}

void save_features(const std::vector<FeatureRecord>& features, const std::string& path,
                   bool binary) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write feature file: " + path);
    const int n = static_cast<int>(features.size());
    const int d = features.empty() ? 1 : static_cast<int>(features[0].vector.size());
    if (binary) {
        out << "FEATS v1b " << n << ' ' << d << '\n';
        std::ofstream ids(path + ".ids");
        for (const auto& f : features) {
            ids << f.image_id << '\n';
            for (double v : f.vector) {
                float fv = static_cast<float>(v);
                out.write(reinterpret_cast<const char*>(&fv), sizeof(fv));
            }
        }
    } else {
        out.precision(17);
        out << "FEATS v1 " << n << ' ' << d << '\n';
        for (const auto& f : features) {
            out << f.image_id;
            for (double v : f.vector) out << ' ' << v;
            out << '\n';
        }
    }
    if (!out) throw IoError("write failed: " + path);
}

void save_labels(const std::vector<std::string>& ids, const std::vector<int>& labels,
                 const std::string& path) {
    if (ids.size() != labels.size())
        throw LengthMismatch("save_labels: ids/labels length mismatch");
    std::ofstream out(path);
    if (!out) throw IoError("cannot write label file: " + path);
    out << "image_id,label\n";
    for (std::size_t i = 0; i < ids.size(); ++i) out << ids[i] << ',' << labels[i] << '\n';
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace floc::style
