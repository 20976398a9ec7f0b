#ifndef FLOC_STYLE_HPP
#define FLOC_STYLE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "floc/common.hpp"

namespace floc::style {

struct DuplicateId : ValidationError {
    using ValidationError::ValidationError;
};
struct ShapeMismatch : ValidationError {
    using ValidationError::ValidationError;
};
struct ZeroVector : ValidationError {
    using ValidationError::ValidationError;
};
struct EmptyGraph : ValidationError {
    using ValidationError::ValidationError;
};
struct EmptyCluster : ValidationError {
    using ValidationError::ValidationError;
};
struct NormalizationUnderflow : ValidationError {
    using ValidationError::ValidationError;
};
struct BadLabel : ValidationError {
    using ValidationError::ValidationError;
};
struct LengthMismatch : ValidationError {
    using ValidationError::ValidationError;
};

enum class Difficulty { Easy, Medium, Hard };

Difficulty parse_difficulty(const std::string& s);
std::string to_string(Difficulty d);

// Per-image capture attributes: which scene and navigation episode the
// image came from, the episode's difficulty band, the capture position,
// and the segmentation-mask object count used for blank filtering.
struct EpisodeMeta {
    std::string image_id;
    std::string scene;
    std::string episode;
    Difficulty difficulty = Difficulty::Medium;
    std::string position_tag;
    int object_count = 0;
};

// Unit-L2-normalized feature vector for one image.
struct FeatureRecord {
    std::string image_id;
    std::vector<double> vector;
};

// Dense symmetric matrix, row-major.
struct Matrix {
    int n = 0;
    std::vector<double> data;

    Matrix() = default;
    explicit Matrix(int n_, double fill = 0.0)
        : n(n_), data(static_cast<std::size_t>(n_) * n_, fill) {}
    double& at(int i, int j) { return data[static_cast<std::size_t>(i) * n + j]; }
    double at(int i, int j) const { return data[static_cast<std::size_t>(i) * n + j]; }
};

// Pairwise room-relationship priors in {-1, -0.5, 0, 0.5, 1}:
//   -1   different scenes (rule 1, dominates everything)
//   +1   same capture position (rule 2)
//   +0.5 same episode, both easy (rule 3)
//   -0.5 same episode, both hard (rule 4)
//    0   otherwise
// Symmetric, unit diagonal.
Matrix build_constraints(const std::vector<EpisodeMeta>& metas);

// D[i][j] = 1 - cos(v_i, v_j); entries in [0, 2], zero diagonal.
Matrix distance_matrix(const std::vector<FeatureRecord>& features);

// D - lambda * M, entrywise.
Matrix refine(const Matrix& distances, const Matrix& constraints, double lambda);

// Keeps records with object_count >= threshold, in input order.
std::vector<std::string> filter_blank(const std::vector<EpisodeMeta>& metas, int threshold);

// --- InfoMap clustering -------------------------------------------------

// Undirected weighted graph with positive edge weights.
struct SimilarityGraph {
    int n = 0;
    struct Edge {
        int a, b;
        double weight;
    };
    std::vector<Edge> edges;
};

// Similarity = clamp(1 - refined, 0, 1) off-diagonal, sparsified to the
// mutual-kNN graph (edge kept only if each endpoint ranks the other among
// its k nearest).
SimilarityGraph build_similarity_graph(const Matrix& refined, int knn);

// Two-level map equation L(P) = q * H(Q) + sum_m p_m * H(P_m), in bits,
// over PageRank node visit rates with the given teleport probability.
double map_equation(const SimilarityGraph& graph, const std::vector<int>& labels,
                    double teleport);

// Greedy map-equation minimization: seeded-order node moves plus module
// aggregation, restarted over a few seed-derived orders, until no move
// improves L. Labels are contiguous from 0. Deterministic for a given
// (graph, teleport, seed).
std::vector<int> infomap_partition(const SimilarityGraph& graph, double teleport,
                                   std::uint64_t seed);

std::vector<int> infomap_cluster(const Matrix& refined, int knn, double teleport,
                                 std::uint64_t seed);

// --- Centroids and losses -----------------------------------------------

// L2-normalized mean feature vector per label.
std::vector<std::vector<double>> compute_centroids(const std::vector<FeatureRecord>& features,
                                                   const std::vector<int>& labels);

// Cluster-level contrastive loss: -log softmax over centroid logits at
// temperature tau, with the analytic gradient w.r.t. the feature.
struct ScalarGrad {
    double loss = 0.0;
    std::vector<double> grad;
};
ScalarGrad contrastive_loss(const std::vector<double>& feature, int positive_label,
                            const std::vector<std::vector<double>>& centroids, double tau);

// Summed binary cross-entropy over same-room probabilities, with d loss/d p.
ScalarGrad style_pair_loss(const std::vector<double>& probs, const std::vector<int>& labels);

// L = l_c + gamma * l_pred.
double total_loss(double l_c, double l_pred, double gamma);

// --- File I/O -----------------------------------------------------------
//
// Metadata: JSON-lines {image_id, scene, episode, difficulty, position_tag,
// object_count}. Features: text "FEATS v1 <N> <d>" + "id v1 ... vd" rows,
// or binary "FEATS v1b <N> <d>" + little-endian float32 payload with ids
// in a "<path>.ids" sidecar (one per line). Labels: CSV image_id,label.

std::vector<EpisodeMeta> load_metadata(const std::string& path);
std::vector<FeatureRecord> load_features(const std::string& path);
void save_features(const std::vector<FeatureRecord>& features, const std::string& path,
                   bool binary = false);
void save_labels(const std::vector<std::string>& ids, const std::vector<int>& labels,
                 const std::string& path);

}  // namespace floc::style

#endif
