#ifndef MSIMAP_PW_VERIFY_HPP
#define MSIMAP_PW_VERIFY_HPP

#include "msimap/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace msimap {

/// Node subset S (complement U) for which signals supported on S satisfy
/// a Poincare inequality with constant lambda = max degree. Condition 1:
/// every s in S has a neighbor in U. Condition 2: every s in S has a
/// neighbor u in U whose adjacency set intersects S only at s.
struct LambdaSet {
    std::vector<int> S;
    std::vector<int> U;
    double lambda = 0.0;  // d(G), the maximum (unweighted) degree
    bool cond1 = false;
    bool cond2 = false;

    bool valid() const { return !S.empty() && cond1 && cond2; }
};

/// psi_f = sum_k a_k L^k f with |a_k| <= 1 and at least one a_k nonzero.
struct PolynomialOperator {
    std::vector<double> coeffs;  // a_0 .. a_K

    void validate() const {
        bool any = false;
        for (double a : coeffs) {
            if (std::abs(a) > 1.0) throw ParameterError("operator coefficients must satisfy |a_k| <= 1");
            if (a != 0.0) any = true;
        }
        if (!any) throw ParameterError("operator needs at least one nonzero coefficient");
    }
};

struct PoincareReport {
    int trials = 0;
    int violations = 0;
    double bound = 0.0;      // lambda or lambda_psi
    double max_ratio = 0.0;  // max ||phi|| / ||L^..phi|| observed
    Vector worst_phi;        // signal achieving max_ratio (counterexample if failed)
    bool pass() const { return trials > 0 && violations == 0; }
};

namespace detail {

/// Unweighted neighbor sets; the theory treats the graph as simple and
/// unweighted regardless of edge weights.
inline std::vector<std::set<int>> adjacency_sets(const SparseGraph& graph) {
    std::vector<std::set<int>> adj(graph.n_nodes());
    for (const Edge& e : graph.edges()) {
        adj[e.i].insert(e.j);
        adj[e.j].insert(e.i);
    }
    return adj;
}

/// A witness u for s must lie in U, touch S only at s, and keep a
/// neighbor inside U (so u is not cut off from the sampled set).
inline bool witness_ok(const std::vector<std::set<int>>& adj, const std::set<int>& S, int s,
                       int u) {
    bool has_u_side = false;
    for (int v : adj[u]) {
        if (v != s && S.count(v)) return false;  // touches S beyond s
        if (!S.count(v)) has_u_side = true;
    }
    return has_u_side;
}

inline bool lambda_set_conditions(const std::vector<std::set<int>>& adj, const std::set<int>& S) {
    for (int s : S) {
        bool has_u_neighbor = false;
        bool has_witness = false;
        for (int u : adj[s]) {
            if (S.count(u)) continue;  // u must lie in U
            has_u_neighbor = true;
            if (witness_ok(adj, S, s, u)) {
                has_witness = true;
                break;
            }
        }
        if (!has_u_neighbor || !has_witness) return false;
    }
    return true;
}

}  // namespace detail

/// Normalized Laplacian of the unweighted view of the graph.
inline SparseMatrix unweighted_normalized_laplacian(const SparseGraph& graph) {
    if (graph.edges().empty()) throw ParameterError("graph has no edges");
    const int n = graph.n_nodes();
    std::vector<double> deg(n, 0.0);
    for (const Edge& e : graph.edges()) {
        deg[e.i] += 1.0;
        deg[e.j] += 1.0;
    }
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(graph.edges().size() * 2 + n);
    for (const Edge& e : graph.edges()) {
        const double v = -1.0 / std::sqrt(deg[e.i] * deg[e.j]);
        trip.emplace_back(e.i, e.j, v);
        trip.emplace_back(e.j, e.i, v);
    }
    for (int i = 0; i < n; ++i) {
        if (deg[i] > 0.0) trip.emplace_back(i, i, 1.0);
    }
    SparseMatrix L(n, n);
    L.setFromTriplets(trip.begin(), trip.end());
    return L;
}

inline double max_degree(const SparseGraph& graph) {
    std::vector<int> deg(graph.n_nodes(), 0);
    for (const Edge& e : graph.edges()) {
        ++deg[e.i];
        ++deg[e.j];
    }
    return static_cast<double>(*std::max_element(deg.begin(), deg.end()));
}

/// Greedy construction: scan nodes in index order and keep a node in S
/// whenever both conditions still hold for the grown set. Maximality is
/// not claimed; validity is re-verified by direct neighborhood inspection.
inline LambdaSet find_lambda_set(const SparseGraph& graph) {
    if (!graph.connected()) throw ParameterError("lambda-set search needs a connected graph");
    const auto adj = detail::adjacency_sets(graph);
    const int n = graph.n_nodes();

    std::set<int> S;
    for (int v = 0; v < n; ++v) {
        S.insert(v);
        if (!detail::lambda_set_conditions(adj, S)) S.erase(v);
    }

    LambdaSet out;
    out.S.assign(S.begin(), S.end());
    for (int v = 0; v < n; ++v) {
        if (!S.count(v)) out.U.push_back(v);
    }
    out.lambda = max_degree(graph);
    // Re-verify each condition separately over the final set.
    out.cond1 = true;
    out.cond2 = true;
    for (int s : out.S) {
        bool c1 = false, c2 = false;
        for (int u : adj[s]) {
            if (S.count(u)) continue;
            c1 = true;
            if (detail::witness_ok(adj, S, s, u)) c2 = true;
        }
        out.cond1 = out.cond1 && c1;
        out.cond2 = out.cond2 && c2;
    }
    if (out.S.empty()) out.cond1 = out.cond2 = false;
    return out;
}

/// Poincare constant of the polynomial operator:
/// lambda_psi = 1 / sqrt(sum_k a_k^2 / lambda^(2k)).
inline double lambda_psi(const PolynomialOperator& op, double lambda) {
    op.validate();
    if (!(lambda > 0.0)) throw ParameterError("lambda must be positive");
    double acc = 0.0;
    double pow2k = 1.0;  // lambda^(2k)
    for (double a : op.coeffs) {
        acc += a * a / pow2k;
        pow2k *= lambda * lambda;
    }
    return 1.0 / std::sqrt(acc);
}

namespace detail {

/// Norm of the stacked operator output {a_k L^k f}_k: each power is a
/// separate coefficient vector, so the total is the root sum of squared
/// per-power norms. Components at different powers never cancel.
inline double polynomial_stacked_norm(const SparseMatrix& L, const PolynomialOperator& op,
                                      const Vector& f) {
    double acc = 0.0;
    Vector power = f;  // L^k f
    for (std::size_t k = 0; k < op.coeffs.size(); ++k) {
        if (k > 0) power = L * power;
        acc += op.coeffs[k] * op.coeffs[k] * power.squaredNorm();
    }
    return std::sqrt(acc);
}

template <typename Apply>
PoincareReport poincare_trials(const SparseGraph& graph, const LambdaSet& ls, double bound,
                               int trials, std::uint64_t seed, Apply&& apply) {
    if (ls.S.empty()) throw ParameterError("Poincare check needs a nonempty S");
    if (trials < 1) throw ParameterError("need at least one trial");

    const int n = graph.n_nodes();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;

    PoincareReport report;
    report.trials = trials;
    report.bound = bound;
    for (int t = 0; t < trials; ++t) {
        Vector phi = Vector::Zero(n);
        do {
            for (int s : ls.S) phi[s] = gauss(rng);
        } while (phi.norm() == 0.0);
        phi /= phi.norm();

        const double denom = apply(phi);
        const double ratio = denom > 0.0 ? phi.norm() / denom : std::numeric_limits<double>::infinity();
        if (ratio > report.max_ratio) {
            report.max_ratio = ratio;
            report.worst_phi = phi;
        }
        if (ratio > bound * (1.0 + 1e-12)) ++report.violations;
    }
    return report;
}

}  // namespace detail

/// ||phi|| <= d(G) * ||L phi|| for random unit phi supported on S.
inline PoincareReport verify_poincare_laplacian(const SparseGraph& graph, const LambdaSet& ls,
                                                int trials, std::uint64_t seed) {
    const SparseMatrix L = unweighted_normalized_laplacian(graph);
    return detail::poincare_trials(graph, ls, ls.lambda, trials, seed,
                                   [&](const Vector& phi) { return Vector(L * phi).norm(); });
}

/// ||phi|| <= lambda_psi * ||psi_phi||, where psi_phi stacks the per-power
/// coefficient vectors a_k L^k phi and ||psi_phi||^2 = sum_k a_k^2 ||L^k phi||^2.
inline PoincareReport verify_poincare_sgw(const SparseGraph& graph, const LambdaSet& ls,
                                          const PolynomialOperator& op, int trials,
                                          std::uint64_t seed) {
    op.validate();
    const SparseMatrix L = unweighted_normalized_laplacian(graph);
    const double bound = lambda_psi(op, ls.lambda);
    return detail::poincare_trials(graph, ls, bound, trials, seed, [&](const Vector& phi) {
        return detail::polynomial_stacked_norm(L, op, phi);
    });
}

/// True iff sampling on U determines every signal in PW_omega: the |U| x m
/// matrix of bandlimited basis rows restricted to U has full column rank
/// (singular values above 1e-8 * sigma_max).
inline bool uniqueness_rank_check(const SparseGraph& graph, double omega,
                                  const std::vector<int>& U) {
    const SparseMatrix L = unweighted_normalized_laplacian(graph);
    Eigen::SelfAdjointEigenSolver<Matrix> eig((Matrix(L)));
    if (eig.info() != Eigen::Success) throw NumericError("eigendecomposition failed");

    int m = 0;
    while (m < eig.eigenvalues().size() && eig.eigenvalues()[m] <= omega) ++m;
    if (m == 0) throw ParameterError("PW_omega is empty for this omega");
    if (static_cast<int>(U.size()) < m) return false;

    Matrix sub(U.size(), m);
    for (std::size_t r = 0; r < U.size(); ++r) {
        sub.row(r) = eig.eigenvectors().block(U[r], 0, 1, m);
    }
    Eigen::JacobiSVD<Matrix> svd(sub);
    const auto& sv = svd.singularValues();
    const double cutoff = 1e-8 * sv[0];
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i) {
        if (sv[i] > cutoff) ++rank;
    }
    return rank == m;
}

/// Serializes a failed trial (graph edges, S, phi) so the case can be
/// replayed as a regression input.
inline void write_counterexample(const std::string& path, const SparseGraph& graph,
                                 const LambdaSet& ls, const Vector& phi) {
    std::ofstream os(path);
    if (!os) throw ParseError("cannot open counterexample file: " + path);
    os << "n=" << graph.n_nodes() << "\n";
    os << "edges=";
    for (std::size_t e = 0; e < graph.edges().size(); ++e) {
        if (e) os << ";";
        os << graph.edges()[e].i << "-" << graph.edges()[e].j;
    }
    os << "\nS=";
    for (std::size_t i = 0; i < ls.S.size(); ++i) {
        if (i) os << ",";
        os << ls.S[i];
    }
    os << "\nphi=";
    os.precision(17);
    for (int i = 0; i < phi.size(); ++i) {
        if (i) os << ",";
        os << phi[i];
    }
    os << "\n";
}

}  // namespace msimap

#endif
