#ifndef MSIMAP_INTERPRET_HPP
#define MSIMAP_INTERPRET_HPP

#include "msimap/graph.hpp"
#include "msimap/optimize.hpp"

#include <algorithm>
#include <limits>
#include <string>
#include <vector>

namespace msimap {

struct FeatureImportance {
    struct Entry {
        int feature_id;
        std::string name;
        double score;      // ascending score = descending importance
        bool degenerate;   // dimension centered to (near) zero
    };
    std::vector<Entry> entries;       // one per embedding dimension (pre-aggregation)
    std::vector<double> raw_scores;   // per embedding dimension
    std::vector<bool> raw_degenerate;
};

struct LaplacianScoreOptions {
    // The score graph defaults to a fresh kNN graph built on the embedding
    // itself; set use_original_graph to score against the input graph.
    bool use_original_graph = false;
    int k_neighbors = 15;
};

namespace detail {

constexpr double kDegenerateScore = std::numeric_limits<double>::max();

/// Rayleigh quotient f^T L f / f^T D f after removing the D-weighted mean.
inline double laplacian_score_dim(const Vector& f, const SparseMatrix& L, const Vector& d,
                                  bool& degenerate) {
    const double dsum = d.sum();
    const Vector centered = f.array() - f.dot(d) / dsum;
    const double denom = centered.dot(d.cwiseProduct(centered));
    if (centered.norm() < 1e-12 || denom <= 0.0) {
        degenerate = true;
        return kDegenerateScore;
    }
    degenerate = false;
    return centered.dot(L * centered) / denom;
}

}  // namespace detail

/// Per-dimension Laplacian scores of the optimized embedding. Smaller
/// score means smoother on the graph, hence more important.
inline FeatureImportance laplacian_score(const Embedding& emb, const SparseGraph& graph,
                                         const LaplacianScoreOptions& opts = {}) {
    if (emb.coords.cols() != graph.n_nodes()) {
        throw ParameterError("embedding/graph node count mismatch");
    }
    const int dims = static_cast<int>(emb.coords.rows());
    const int n = graph.n_nodes();

    const SparseGraph* score_graph = &graph;
    std::optional<SparseGraph> emb_graph;
    if (!opts.use_original_graph) {
        const int k = std::min(opts.k_neighbors, n - 1);
        try {
            emb_graph.emplace(build_knn_graph(PointCloud(emb.coords.transpose()), k));
            score_graph = &*emb_graph;
        } catch (const DegenerateInputError&) {
            // Fully collapsed embedding; fall back to the input graph.
        }
    }
    const Laplacian L = build_laplacian(*score_graph, LaplacianKind::Combinatorial);

    FeatureImportance out;
    out.raw_scores.resize(dims);
    out.raw_degenerate.resize(dims);
    for (int l = 0; l < dims; ++l) {
        bool degen = false;
        out.raw_scores[l] = detail::laplacian_score_dim(emb.coords.row(l).transpose(), L.matrix,
                                                        L.degrees, degen);
        out.raw_degenerate[l] = degen;
    }
    return out;
}

/// Aggregates dimension scores to features and sorts most-important first
/// (ascending score, ties by feature index). Method 2 maps dimension l to
/// feature l directly; Method 1 takes the minimum over a feature's scale
/// rows, so a feature counts as important if any scale captures structure.
inline FeatureImportance rank_features(FeatureImportance importance, const Embedding& emb) {
    const int dims = static_cast<int>(importance.raw_scores.size());
    int n_features = dims;
    int n_bands = 1;
    if (emb.kind == EmbeddingKind::Method1) {
        n_bands = emb.n_bands;
        n_features = dims / n_bands;
    }

    importance.entries.clear();
    for (int r = 0; r < n_features; ++r) {
        double best = detail::kDegenerateScore;
        bool degen = true;
        for (int j = 0; j < n_bands; ++j) {
            const int row = j * n_features + r;
            if (!importance.raw_degenerate[row] && importance.raw_scores[row] < best) {
                best = importance.raw_scores[row];
                degen = false;
            }
        }
        std::string name = r < static_cast<int>(emb.feature_names.size()) ? emb.feature_names[r]
                                                                          : std::string{};
        importance.entries.push_back({r, std::move(name), best, degen});
    }
    std::stable_sort(importance.entries.begin(), importance.entries.end(),
                     [](const auto& a, const auto& b) {
                         return a.score < b.score || (a.score == b.score && a.feature_id < b.feature_id);
                     });
    return importance;
}

}  // namespace msimap

#endif
