#ifndef MSIMAP_GRAPH_HPP
#define MSIMAP_GRAPH_HPP

#include "msimap/common.hpp"
#include "msimap/kd_tree.hpp"
#include "msimap/point_cloud.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <random>
#include <utility>
#include <vector>

namespace msimap {

struct Edge {
    int i, j;   // i < j
    double w;   // > 0
};

/// Symmetric weighted adjacency over n nodes, stored as an i<j edge list
/// plus a neighbor index. Immutable after construction.
class SparseGraph {
  public:
    SparseGraph(int n_nodes, std::vector<Edge> edges)
        : n_(n_nodes), edges_(std::move(edges)), adj_(n_nodes) {
        if (n_ < 1) throw ParameterError("SparseGraph needs at least one node");
        for (std::size_t e = 0; e < edges_.size(); ++e) {
            const Edge& ed = edges_[e];
            if (ed.i < 0 || ed.j >= n_ || ed.i >= ed.j) {
                throw ParameterError("edge endpoints must satisfy 0 <= i < j < n");
            }
            if (!(ed.w > 0.0) || !std::isfinite(ed.w)) {
                throw ParameterError("edge weights must be finite and positive");
            }
            adj_[ed.i].push_back(static_cast<int>(e));
            adj_[ed.j].push_back(static_cast<int>(e));
        }
    }

    int n_nodes() const { return n_; }
    const std::vector<Edge>& edges() const { return edges_; }

    /// Edge ids incident to node v.
    const std::vector<int>& incident(int v) const { return adj_[v]; }

    int other_end(int edge_id, int v) const {
        const Edge& e = edges_[edge_id];
        return e.i == v ? e.j : e.i;
    }

    /// Weight of (i, j) in either orientation; 0 when absent.
    double weight(int i, int j) const {
        for (int e : adj_[i]) {
            if (other_end(e, i) == j) return edges_[e].w;
        }
        return 0.0;
    }

    int degree_count(int v) const { return static_cast<int>(adj_[v].size()); }

    Vector weighted_degrees() const {
        Vector d = Vector::Zero(n_);
        for (const Edge& e : edges_) {
            d[e.i] += e.w;
            d[e.j] += e.w;
        }
        return d;
    }

    /// Size of the largest connected component.
    int largest_component_size() const {
        std::vector<int> seen(n_, 0);
        std::vector<int> stack;
        int best = 0;
        for (int s = 0; s < n_; ++s) {
            if (seen[s]) continue;
            int size = 0;
            stack.push_back(s);
            seen[s] = 1;
            while (!stack.empty()) {
                const int v = stack.back();
                stack.pop_back();
                ++size;
                for (int e : adj_[v]) {
                    const int u = other_end(e, v);
                    if (!seen[u]) {
                        seen[u] = 1;
                        stack.push_back(u);
                    }
                }
            }
            best = std::max(best, size);
        }
        return best;
    }

    bool connected() const { return largest_component_size() == n_; }

  private:
    int n_;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> adj_;
};

enum class LaplacianKind { Combinatorial, Normalized };

struct Laplacian {
    LaplacianKind kind;
    SparseMatrix matrix;
    Vector degrees;  // weighted degrees of the source graph
};

enum class SpectrumMethod { PowerIteration, AnalyticBound };

struct SpectrumBound {
    double lambda_max;
    SpectrumMethod method;
};

/// Bandwidth used in the Gaussian edge weights. GlobalMean is the mean
/// distance to the k-th neighbor over all points; PerPoint uses the
/// geometric mean of the two endpoints' k-th-neighbor distances, which
/// keeps weights comparable across regions of very different density.
enum class BandwidthMode { GlobalMean, PerPoint };

inline SparseGraph build_knn_graph(const PointCloud& points, int k,
                                   std::optional<double> sigma = std::nullopt,
                                   BandwidthMode bandwidth = BandwidthMode::GlobalMean) {
    const int n = points.n_samples();
    if (k < 1 || k > n - 1) throw ParameterError("k must be in [1, N-1]");
    if (sigma && !(*sigma > 0.0)) throw ParameterError("sigma must be positive");

    // Exact search either way; the tree pays off on larger inputs.
    constexpr int kBruteForceLimit = 20000;
    const Matrix& X = points.data();
    std::vector<std::vector<std::pair<double, int>>> nn(n);
    if (n <= kBruteForceLimit && static_cast<long long>(n) * n <= 4'000'000LL) {
        for (int i = 0; i < n; ++i) {
            std::vector<std::pair<double, int>> cand;
            cand.reserve(n - 1);
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                cand.emplace_back((X.row(i) - X.row(j)).squaredNorm(), j);
            }
            std::partial_sort(cand.begin(), cand.begin() + k, cand.end());
            cand.resize(k);
            nn[i] = std::move(cand);
        }
    } else {
        detail::KdTree tree(X);
        for (int i = 0; i < n; ++i) {
            nn[i] = tree.query(X.row(i).transpose(), k, i);
        }
    }

    Vector kth(n);
    for (int i = 0; i < n; ++i) kth[i] = std::sqrt(nn[i].back().first);

    double sigma_global = 0.0;
    if (sigma) {
        sigma_global = *sigma;
    } else {
        sigma_global = kth.mean();
        if (!(sigma_global > 0.0)) {
            throw DegenerateInputError("all points coincide; supply sigma explicitly");
        }
    }

    // Directed kNN weights symmetrized by max.
    std::map<std::pair<int, int>, double> sym;
    for (int i = 0; i < n; ++i) {
        for (const auto& [d2, j] : nn[i]) {
            double s2;
            if (sigma || bandwidth == BandwidthMode::GlobalMean) {
                s2 = sigma_global * sigma_global;
            } else {
                const double si = kth[i] > 0 ? kth[i] : sigma_global;
                const double sj = kth[j] > 0 ? kth[j] : sigma_global;
                s2 = si * sj;
            }
            const double w = std::exp(-d2 / (2.0 * s2));
            auto key = std::minmax(i, j);
            auto [it, inserted] = sym.emplace(std::pair{key.first, key.second}, w);
            if (!inserted) it->second = std::max(it->second, w);
        }
    }

    std::vector<Edge> edges;
    edges.reserve(sym.size());
    for (const auto& [key, w] : sym) {
        if (w > 0.0) edges.push_back({key.first, key.second, w});
    }
    return SparseGraph(n, std::move(edges));
}

inline Laplacian build_laplacian(const SparseGraph& graph, LaplacianKind kind) {
    if (graph.edges().empty()) throw ParameterError("graph has no edges");
    const int n = graph.n_nodes();
    const Vector d = graph.weighted_degrees();

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(graph.edges().size() * 2 + n);
    if (kind == LaplacianKind::Combinatorial) {
        for (const Edge& e : graph.edges()) {
            trip.emplace_back(e.i, e.j, -e.w);
            trip.emplace_back(e.j, e.i, -e.w);
        }
        for (int i = 0; i < n; ++i) {
            if (d[i] > 0.0) trip.emplace_back(i, i, d[i]);
        }
    } else {
        for (const Edge& e : graph.edges()) {
            const double v = -e.w / std::sqrt(d[e.i] * d[e.j]);
            trip.emplace_back(e.i, e.j, v);
            trip.emplace_back(e.j, e.i, v);
        }
        for (int i = 0; i < n; ++i) {
            if (d[i] > 0.0) trip.emplace_back(i, i, 1.0);
        }
    }
    SparseMatrix L(n, n);
    L.setFromTriplets(trip.begin(), trip.end());
    return Laplacian{kind, std::move(L), d};
}

inline SpectrumBound estimate_lambda_max(const Laplacian& L) {
    constexpr int kMaxIter = 200;
    constexpr double kRelTol = 1e-4;
    constexpr double kInflate = 1.01;

    const int n = static_cast<int>(L.matrix.rows());
    std::mt19937_64 rng(0x5eed);
    std::normal_distribution<double> gauss;
    Vector x(n);
    for (int i = 0; i < n; ++i) x[i] = gauss(rng);
    x.normalize();

    double lambda = 0.0;
    bool converged = false;
    for (int it = 0; it < kMaxIter; ++it) {
        Vector y = L.matrix * x;
        const double norm = y.norm();
        if (norm == 0.0) break;
        const double next = norm;  // Rayleigh growth of the dominant mode
        y /= norm;
        if (it > 0 && std::abs(next - lambda) <= kRelTol * std::max(next, 1e-300)) {
            lambda = next;
            converged = true;
            break;
        }
        lambda = next;
        x = std::move(y);
    }

    if (converged) {
        return SpectrumBound{lambda * kInflate, SpectrumMethod::PowerIteration};
    }
    if (L.kind == LaplacianKind::Normalized) {
        return SpectrumBound{2.0, SpectrumMethod::AnalyticBound};
    }
    return SpectrumBound{2.0 * L.degrees.maxCoeff(), SpectrumMethod::AnalyticBound};
}

}  // namespace msimap

#endif
