#ifndef MSIMAP_OPTIMIZE_HPP
#define MSIMAP_OPTIMIZE_HPP

#include "msimap/encode.hpp"
#include "msimap/graph.hpp"
#include "msimap/sampling.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <utility>
#include <vector>

namespace msimap {

enum class SamplerKind { WeightProportional, EbcKde };

struct OptimizerConfig {
    int epochs = 500;
    double initial_lr = 1.0;          // linear decay to 0
    int negatives_per_positive = 5;
    double min_dist_eps = 1e-3;
    std::uint64_t seed = 0;
    SamplerKind sampler_kind = SamplerKind::WeightProportional;
    bool deterministic = true;

    void validate() const {
        if (epochs < 0) throw ParameterError("epochs must be >= 0");
        if (!(initial_lr > 0.0)) throw ParameterError("learning rate must be positive");
        if (negatives_per_positive < 1) throw ParameterError("need >= 1 negative per positive");
        if (!(min_dist_eps > 0.0)) throw ParameterError("min_dist_eps must be positive");
    }
};

enum class EmbeddingKind { Method1, Method2 };

struct Embedding {
    EmbeddingKind kind;
    Matrix coords;  // rows x N; Method1: K*D rows, Method2: D rows
    int n_bands = 1;
    std::vector<std::string> feature_names;
    std::string provenance;
};

/// v_ij = 1 / (1 + ||a - b||^2), in (0, 1].
inline double embedding_similarity(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw ParameterError("vectors must have equal length");
    return 1.0 / (1.0 + (a - b).squaredNorm());
}

namespace detail {

// One fuzzy cross-entropy pair term; 0*log(0/x) == 0 and the w = 1
// second term vanishes. 1 - v is clamped through min_dist_eps so
// coincident points never yield an infinite loss.
inline double pair_loss(double w, double d2, double eps) {
    double loss = 0.0;
    if (w > 0.0) {
        const double v = 1.0 / (1.0 + d2);
        loss += w * std::log(w / v);
    }
    if (w < 1.0) {
        const double d2c = std::max(d2, eps);
        const double one_minus_v = d2c / (1.0 + d2c);
        loss += (1.0 - w) * std::log((1.0 - w) / one_minus_v);
    }
    return loss;
}

}  // namespace detail

/// Exact loss over all node pairs; test oracle, refuses N > 500.
inline double cross_entropy_loss(const Embedding& emb, const SparseGraph& graph,
                                 double min_dist_eps = 1e-3) {
    const int n = graph.n_nodes();
    if (emb.coords.cols() != n) throw ParameterError("embedding/graph node count mismatch");
    if (n > 500) throw OracleSizeError("exact loss limited to N <= 500");

    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double w = graph.weight(i, j);
            if (emb.kind == EmbeddingKind::Method1) {
                const double d2 = (emb.coords.col(i) - emb.coords.col(j)).squaredNorm();
                total += detail::pair_loss(w, d2, min_dist_eps);
            } else {
                // Method 2 sums the per-scale losses over the tensor slices.
                const int d = static_cast<int>(emb.coords.rows()) / emb.n_bands;
                for (int k = 0; k < emb.n_bands; ++k) {
                    const double d2 =
                        (emb.coords.col(i).segment(k * d, d) - emb.coords.col(j).segment(k * d, d))
                            .squaredNorm();
                    total += detail::pair_loss(w, d2, min_dist_eps);
                }
            }
        }
    }
    return total;
}

namespace detail {

constexpr double kGradientClip = 4.0;

inline double clip(double x) {
    return x > kGradientClip ? kGradientClip : (x < -kGradientClip ? -kGradientClip : x);
}

/// Attraction on a positive pair: both endpoints move toward each other
/// by lr * w * v * (psi_i - psi_j), per-coordinate clipped.
inline void attract(Matrix& emb, int i, int j, double w, double lr) {
    const int dim = static_cast<int>(emb.rows());
    double d2 = 0.0;
    for (int c = 0; c < dim; ++c) {
        const double diff = emb(c, i) - emb(c, j);
        d2 += diff * diff;
    }
    const double coef = w / (1.0 + d2);
    for (int c = 0; c < dim; ++c) {
        const double g = lr * clip(coef * (emb(c, i) - emb(c, j)));
        emb(c, i) -= g;
        emb(c, j) += g;
    }
}

/// Repulsion from a negative node: psi_i moves away by
/// lr * v * (psi_i - psi_m) / max(||psi_i - psi_m||^2, eps).
inline void repel(Matrix& emb, int i, int m, double lr, double eps) {
    const int dim = static_cast<int>(emb.rows());
    double d2 = 0.0;
    for (int c = 0; c < dim; ++c) {
        const double diff = emb(c, i) - emb(c, m);
        d2 += diff * diff;
    }
    const double coef = 1.0 / ((1.0 + d2) * std::max(d2, eps));
    for (int c = 0; c < dim; ++c) {
        const double g = lr * clip(coef * (emb(c, i) - emb(c, m)));
        emb(c, i) += g;
    }
}

}  // namespace detail

/// One SGD step of Method 1: attraction on the positive edge (i, j),
/// repulsion from each listed negative.
inline void sgd_step_method1(Matrix& emb, int i, int j, double w,
                             const std::vector<int>& negatives, double lr,
                             double min_dist_eps = 1e-3) {
    if (i == j) throw ParameterError("positive edge endpoints must differ");
    detail::attract(emb, i, j, w, lr);
    for (int m : negatives) {
        if (m == i) throw ParameterError("negatives must exclude the anchor node");
        detail::repel(emb, i, m, lr, min_dist_eps);
    }
}

/// Draws positive-edge ids per epoch. WeightProportional picks each edge
/// with probability proportional to w_ij; EbcKde draws a fresh
/// centrality-density plan every epoch.
class PositiveSampler {
  public:
    PositiveSampler(const SparseGraph& graph, SamplerKind kind, std::uint64_t seed)
        : graph_(&graph), kind_(kind) {
        if (graph.edges().empty()) throw ParameterError("graph has no edges");
        if (kind_ == SamplerKind::WeightProportional) {
            std::vector<double> w;
            w.reserve(graph.edges().size());
            for (const Edge& e : graph.edges()) w.push_back(e.w);
            pick_ = std::discrete_distribution<int>(w.begin(), w.end());
        } else {
            // EBC and the KDE are data-dependent but fixed; precompute the
            // density weights once and redraw the plan each epoch.
            const CentralityGraph cg = edge_betweenness(graph);
            std::vector<double> probs;
            try {
                const KdeDensity density = kde_fit(cg.w_be);
                probs.reserve(cg.w_be.size());
                for (double v : cg.w_be) probs.push_back(density(v));
            } catch (const DegenerateInputError&) {
                probs.assign(cg.w_be.size(), 1.0);
            }
            pick_ = std::discrete_distribution<int>(probs.begin(), probs.end());
        }
        (void)seed;
    }

    int draw(std::mt19937_64& rng) { return pick_(rng); }

  private:
    const SparseGraph* graph_;
    SamplerKind kind_;
    std::discrete_distribution<int> pick_;
};

namespace detail {

inline std::string provenance_line(const OptimizerConfig& cfg, EmbeddingKind kind) {
    std::ostringstream os;
    os << "seed=" << cfg.seed << ", method=" << (kind == EmbeddingKind::Method1 ? 1 : 2)
       << ", epochs=" << cfg.epochs << ", lr=" << cfg.initial_lr
       << ", negatives=" << cfg.negatives_per_positive
       << ", sampler=" << (cfg.sampler_kind == SamplerKind::WeightProportional ? "weight" : "ebc");
    return os.str();
}

template <typename StepPair>
inline void run_epochs(const SparseGraph& graph, const OptimizerConfig& cfg, StepPair&& step) {
    std::mt19937_64 rng(cfg.seed);
    PositiveSampler sampler(graph, cfg.sampler_kind, cfg.seed);
    std::uniform_int_distribution<int> uniform_node(0, graph.n_nodes() - 1);
    const int per_epoch = static_cast<int>(graph.edges().size());
    std::vector<int> negatives(cfg.negatives_per_positive);

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        const double lr = cfg.initial_lr * (1.0 - static_cast<double>(epoch) / cfg.epochs);
        for (int t = 0; t < per_epoch; ++t) {
            const Edge& e = graph.edges()[sampler.draw(rng)];
            for (int& m : negatives) {
                do {
                    m = uniform_node(rng);
                } while (m == e.i);
            }
            step(e, negatives, lr);
        }
    }
}

}  // namespace detail

inline Embedding optimize_method1(const EncodedMethod1& encoded, const SparseGraph& graph,
                                  const OptimizerConfig& cfg) {
    cfg.validate();
    if (encoded.matrix.cols() != graph.n_nodes()) {
        throw ParameterError("encoding/graph node count mismatch");
    }
    Matrix emb = encoded.matrix;
    detail::run_epochs(graph, cfg, [&](const Edge& e, const std::vector<int>& negatives, double lr) {
        sgd_step_method1(emb, e.i, e.j, e.w, negatives, lr, cfg.min_dist_eps);
    });
    return Embedding{EmbeddingKind::Method1, std::move(emb), encoded.n_bands, {},
                     detail::provenance_line(cfg, EmbeddingKind::Method1)};
}

/// Method 2: every sampled pair updates all scale slices of the tensor;
/// the optimized slices are summed into the final D x N embedding.
inline Embedding optimize_method2(const EncodedMethod2& encoded, const SparseGraph& graph,
                                  const OptimizerConfig& cfg) {
    cfg.validate();
    const SgwTensor& tensor = encoded.tensor;
    if (tensor.n_nodes() != graph.n_nodes()) {
        throw ParameterError("encoding/graph node count mismatch");
    }
    const int K = tensor.n_bands();
    std::vector<Matrix> slices;
    slices.reserve(K);
    for (int k = 0; k < K; ++k) slices.push_back(tensor.slice(k));

    detail::run_epochs(graph, cfg, [&](const Edge& e, const std::vector<int>& negatives, double lr) {
        for (Matrix& slice : slices) {
            detail::attract(slice, e.i, e.j, e.w, lr);
            for (int m : negatives) detail::repel(slice, e.i, m, lr, cfg.min_dist_eps);
        }
    });

    Matrix sum = Matrix::Zero(tensor.n_features(), tensor.n_nodes());
    for (const Matrix& slice : slices) sum += slice;
    return Embedding{EmbeddingKind::Method2, std::move(sum), 1, encoded.feature_names,
                     detail::provenance_line(cfg, EmbeddingKind::Method2)};
}

}  // namespace msimap

#endif
