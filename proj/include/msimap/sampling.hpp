#ifndef MSIMAP_SAMPLING_HPP
#define MSIMAP_SAMPLING_HPP

#include "msimap/graph.hpp"
#include "msimap/sgw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <random>
#include <utility>
#include <vector>

namespace msimap {

/// Base graph annotated with per-edge betweenness centrality values.
struct CentralityGraph {
    const SparseGraph* base;
    std::vector<double> w_be;  // indexed like base->edges()
};

/// Exact edge betweenness centrality. Shortest paths use lengths 1/w so
/// strong similarity edges are short; unordered pairs counted once.
/// Brandes-style single-source accumulation over all sources.
inline CentralityGraph edge_betweenness(const SparseGraph& graph) {
    const int n = graph.n_nodes();
    const auto& edges = graph.edges();
    const int m = static_cast<int>(edges.size());
    std::vector<double> score(m, 0.0);

    constexpr double kInf = std::numeric_limits<double>::infinity();
    // Relative tolerance when comparing path lengths.
    const auto close = [](double a, double b) {
        if (!std::isfinite(a) || !std::isfinite(b)) return false;
        return std::abs(a - b) <= 1e-12 * std::max({std::abs(a), std::abs(b), 1.0});
    };

    std::vector<double> dist(n);
    std::vector<double> sigma(n);
    std::vector<double> delta(n);
    std::vector<std::vector<int>> pred_edges(n);  // edge ids of shortest-path predecessors
    std::vector<int> order;
    order.reserve(n);

    for (int s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), kInf);
        std::fill(sigma.begin(), sigma.end(), 0.0);
        std::fill(delta.begin(), delta.end(), 0.0);
        for (auto& p : pred_edges) p.clear();
        order.clear();

        using QItem = std::pair<double, int>;
        std::priority_queue<QItem, std::vector<QItem>, std::greater<>> pq;
        dist[s] = 0.0;
        sigma[s] = 1.0;
        pq.emplace(0.0, s);
        std::vector<char> done(n, 0);

        while (!pq.empty()) {
            auto [d, v] = pq.top();
            pq.pop();
            if (done[v]) continue;
            done[v] = 1;
            order.push_back(v);
            for (int e : graph.incident(v)) {
                const int u = graph.other_end(e, v);
                const double nd = dist[v] + 1.0 / edges[e].w;
                if (!done[u] && nd < dist[u] && !close(nd, dist[u])) {
                    dist[u] = nd;
                    sigma[u] = sigma[v];
                    pred_edges[u].assign(1, e);
                    pq.emplace(nd, u);
                } else if (!done[u] && close(nd, dist[u])) {
                    sigma[u] += sigma[v];
                    pred_edges[u].push_back(e);
                }
            }
        }

        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            const int w = *it;
            for (int e : pred_edges[w]) {
                const int v = graph.other_end(e, w);
                const double c = sigma[v] / sigma[w] * (1.0 + delta[w]);
                score[e] += c;
                delta[v] += c;
            }
        }
    }

    for (double& x : score) x /= 2.0;  // each unordered pair counted once
    return CentralityGraph{&graph, std::move(score)};
}

/// Gaussian kernel density estimate with Silverman's bandwidth.
class KdeDensity {
  public:
    KdeDensity(std::vector<double> values, double bandwidth)
        : values_(std::move(values)), h_(bandwidth) {}

    double operator()(double x) const {
        double acc = 0.0;
        for (double v : values_) {
            const double z = (v - x) / h_;
            acc += std::exp(-0.5 * z * z);
        }
        return acc / (values_.size() * h_ * std::sqrt(2.0 * M_PI));
    }

    double bandwidth() const { return h_; }
    const std::vector<double>& samples() const { return values_; }

  private:
    std::vector<double> values_;
    double h_;
};

inline KdeDensity kde_fit(std::vector<double> values) {
    const std::size_t n = values.size();
    if (n < 2) throw ParameterError("KDE needs at least 2 values");

    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= (n - 1);
    const double sd = std::sqrt(var);

    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    const auto quantile = [&](double q) {
        const double pos = q * (n - 1);
        const std::size_t lo = static_cast<std::size_t>(pos);
        const double frac = pos - lo;
        return lo + 1 < n ? sorted[lo] * (1 - frac) + sorted[lo + 1] * frac : sorted[lo];
    };
    const double iqr = quantile(0.75) - quantile(0.25);

    // Silverman's rule; fall back to the other spread measure when one is zero.
    double spread = std::min(sd, iqr / 1.34);
    if (spread == 0.0) spread = std::max(sd, iqr / 1.34);
    const double h = 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
    if (!(h > 0.0)) {
        throw DegenerateInputError("all values identical; density is degenerate");
    }
    return KdeDensity(std::move(values), h);
}

/// Positive-edge plan: edge ids with multiplicity.
struct EdgeSamplePlan {
    std::vector<int> edge_ids;
    bool uniform_fallback = false;
};

/// Algorithm: compute EBC, fit a KDE on the centrality values, and draw
/// edges with probability proportional to the density at their own EBC
/// value. Edges in the low-EBC bulk are drawn often; rare high-EBC
/// bridges seldom.
inline EdgeSamplePlan sample_edges_ebc(const SparseGraph& graph, int n_e, std::uint64_t seed) {
    if (graph.edges().empty()) throw ParameterError("graph has no edges");
    const CentralityGraph cg = edge_betweenness(graph);

    std::mt19937_64 rng(seed);
    EdgeSamplePlan plan;
    plan.edge_ids.reserve(n_e);

    std::vector<double> probs;
    try {
        const KdeDensity density = kde_fit(cg.w_be);
        probs.reserve(cg.w_be.size());
        for (double v : cg.w_be) probs.push_back(density(v));
    } catch (const DegenerateInputError&) {
        probs.assign(cg.w_be.size(), 1.0);
        plan.uniform_fallback = true;
    }

    std::discrete_distribution<int> pick(probs.begin(), probs.end());
    for (int t = 0; t < n_e; ++t) plan.edge_ids.push_back(pick(rng));
    return plan;
}

/// Per-node diffusion-spread statistic: L2 norm of the node's coefficients
/// over all (band, feature) pairs. Feeds the node-level KDE sampler.
inline Vector node_importance_sgw(const SgwTensor& tensor) {
    const int n = tensor.n_nodes();
    Vector v_bar = Vector::Zero(n);
    for (int j = 0; j < tensor.n_bands(); ++j) {
        v_bar += tensor.slice(j).colwise().squaredNorm().transpose();
    }
    return v_bar.cwiseSqrt();
}

}  // namespace msimap

#endif
