#ifndef MSIMAP_EVAL_HPP
#define MSIMAP_EVAL_HPP

#include "msimap/point_cloud.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace msimap {

struct LabeledDataset {
    Matrix points;            // N x D
    std::vector<int> labels;  // in [0, n_classes)
    int n_classes;
};

/// Two interleaving half-circles: upper arc (cos t, sin t), lower arc
/// (1 - cos t, -sin t + 0.5), t evenly spaced on [0, pi], plus isotropic
/// Gaussian noise.
inline LabeledDataset generate_two_moons(int n = 600, double noise = 0.12, std::uint64_t seed = 0) {
    if (n < 4 || n % 2 != 0) throw ParameterError("n must be even and >= 4");
    if (noise < 0.0) throw ParameterError("noise must be >= 0");
    const int half = n / 2;
    Matrix pts(n, 2);
    for (int i = 0; i < half; ++i) {
        const double t = M_PI * i / (half - 1);
        pts(i, 0) = std::cos(t);
        pts(i, 1) = std::sin(t);
        pts(half + i, 0) = 1.0 - std::cos(t);
        pts(half + i, 1) = -std::sin(t) + 0.5;
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    if (noise > 0.0) {
        for (int i = 0; i < n; ++i) {
            pts(i, 0) += noise * gauss(rng);
            pts(i, 1) += noise * gauss(rng);
        }
    }
    std::vector<int> labels(n);
    std::fill(labels.begin() + half, labels.end(), 1);
    return LabeledDataset{std::move(pts), std::move(labels), 2};
}

/// 500 points uniform in a disk of radius 0.5 (class 0) inside a circle of
/// radius 2 sampled with 100 points and radial jitter 0.02 (class 1).
inline LabeledDataset generate_dense_sparse(std::uint64_t seed = 0) {
    constexpr int kDense = 500;
    constexpr int kCircle = 100;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    Matrix pts(kDense + kCircle, 2);
    for (int i = 0; i < kDense; ++i) {
        const double r = 0.5 * std::sqrt(unit(rng));
        const double th = 2.0 * M_PI * unit(rng);
        pts(i, 0) = r * std::cos(th);
        pts(i, 1) = r * std::sin(th);
    }
    for (int i = 0; i < kCircle; ++i) {
        const double th = 2.0 * M_PI * unit(rng);
        const double r = 2.0 + 0.02 * gauss(rng);
        pts(kDense + i, 0) = r * std::cos(th);
        pts(kDense + i, 1) = r * std::sin(th);
    }
    std::vector<int> labels(kDense + kCircle, 0);
    std::fill(labels.begin() + kDense, labels.end(), 1);
    return LabeledDataset{std::move(pts), std::move(labels), 2};
}

namespace detail {

inline double inertia_of(const Matrix& X, const Matrix& centroids, const std::vector<int>& assign) {
    double total = 0.0;
    for (int i = 0; i < X.rows(); ++i) {
        total += (X.row(i) - centroids.row(assign[i])).squaredNorm();
    }
    return total;
}

/// Greedy k-means++ seeding: each new centroid is the best of several
/// D^2-sampled candidates.
inline Matrix kmeanspp_init(const Matrix& X, int k, std::mt19937_64& rng) {
    const int n = static_cast<int>(X.rows());
    const int n_candidates = 2 + static_cast<int>(std::log(static_cast<double>(k)));
    Matrix centroids(k, X.cols());

    std::uniform_int_distribution<int> uniform(0, n - 1);
    centroids.row(0) = X.row(uniform(rng));
    Vector d2(n);
    for (int i = 0; i < n; ++i) d2[i] = (X.row(i) - centroids.row(0)).squaredNorm();

    for (int c = 1; c < k; ++c) {
        std::discrete_distribution<int> pick(d2.data(), d2.data() + n);
        int best_cand = -1;
        double best_total = std::numeric_limits<double>::infinity();
        Vector best_d2;
        for (int t = 0; t < n_candidates; ++t) {
            const int cand = d2.sum() > 0 ? pick(rng) : uniform(rng);
            Vector nd2(n);
            double total = 0.0;
            for (int i = 0; i < n; ++i) {
                nd2[i] = std::min(d2[i], (X.row(i) - X.row(cand)).squaredNorm());
                total += nd2[i];
            }
            if (total < best_total) {
                best_total = total;
                best_cand = cand;
                best_d2 = std::move(nd2);
            }
        }
        centroids.row(c) = X.row(best_cand);
        d2 = std::move(best_d2);
    }
    return centroids;
}

}  // namespace detail

/// Lloyd's algorithm, greedy k-means++ seeding, best of `restarts` runs.
inline std::vector<int> kmeans(const Matrix& points, int k, std::uint64_t seed, int restarts = 10) {
    const int n = static_cast<int>(points.rows());
    if (k < 1 || k > n) throw ParameterError("k must be in [1, N]");
    constexpr int kMaxIter = 300;

    std::mt19937_64 rng(seed);
    std::vector<int> best_assign;
    double best_inertia = std::numeric_limits<double>::infinity();

    for (int run = 0; run < restarts; ++run) {
        Matrix centroids = detail::kmeanspp_init(points, k, rng);
        std::vector<int> assign(n, -1);
        for (int iter = 0; iter < kMaxIter; ++iter) {
            bool changed = false;
            for (int i = 0; i < n; ++i) {
                int best = 0;
                double bd = (points.row(i) - centroids.row(0)).squaredNorm();
                for (int c = 1; c < k; ++c) {
                    const double d = (points.row(i) - centroids.row(c)).squaredNorm();
                    if (d < bd) {
                        bd = d;
                        best = c;
                    }
                }
                if (assign[i] != best) {
                    assign[i] = best;
                    changed = true;
                }
            }
            if (!changed && iter > 0) break;

            Matrix sums = Matrix::Zero(k, points.cols());
            std::vector<int> counts(k, 0);
            for (int i = 0; i < n; ++i) {
                sums.row(assign[i]) += points.row(i);
                ++counts[assign[i]];
            }
            for (int c = 0; c < k; ++c) {
                if (counts[c] > 0) {
                    centroids.row(c) = sums.row(c) / counts[c];
                } else {
                    // Re-seed an emptied centroid at the farthest point.
                    int far = 0;
                    double fd = -1.0;
                    for (int i = 0; i < n; ++i) {
                        const double d = (points.row(i) - centroids.row(assign[i])).squaredNorm();
                        if (d > fd) {
                            fd = d;
                            far = i;
                        }
                    }
                    centroids.row(c) = points.row(far);
                }
            }
        }
        const double inertia = detail::inertia_of(points, centroids, assign);
        if (inertia < best_inertia) {
            best_inertia = inertia;
            best_assign = assign;
        }
    }
    return best_assign;
}

namespace detail {

struct Contingency {
    std::vector<std::vector<long long>> cells;
    std::vector<long long> a, b;
    long long n;
};

inline Contingency contingency_table(const std::vector<int>& x, const std::vector<int>& y) {
    if (x.size() != y.size()) throw ParameterError("labelings must have equal length");
    if (x.empty()) throw ParameterError("labelings must be non-empty");
    const int ka = *std::max_element(x.begin(), x.end()) + 1;
    const int kb = *std::max_element(y.begin(), y.end()) + 1;
    Contingency c;
    c.cells.assign(ka, std::vector<long long>(kb, 0));
    c.a.assign(ka, 0);
    c.b.assign(kb, 0);
    c.n = static_cast<long long>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < 0 || y[i] < 0) throw ParameterError("labels must be non-negative");
        ++c.cells[x[i]][y[i]];
        ++c.a[x[i]];
        ++c.b[y[i]];
    }
    return c;
}

inline double comb2(long long v) { return 0.5 * static_cast<double>(v) * (v - 1); }

}  // namespace detail

/// Pair-counting adjusted Rand index with expected-index correction.
inline double adjusted_rand_index(const std::vector<int>& x, const std::vector<int>& y) {
    const auto c = detail::contingency_table(x, y);
    double sum_cells = 0.0, sum_a = 0.0, sum_b = 0.0;
    for (const auto& row : c.cells) {
        for (long long v : row) sum_cells += detail::comb2(v);
    }
    for (long long v : c.a) sum_a += detail::comb2(v);
    for (long long v : c.b) sum_b += detail::comb2(v);
    const double total = detail::comb2(c.n);
    const double expected = sum_a * sum_b / total;
    const double maximum = 0.5 * (sum_a + sum_b);
    if (maximum == expected) return 1.0;  // both partitions trivial
    return (sum_cells - expected) / (maximum - expected);
}

/// Adjusted mutual information, permutation-model expectation, arithmetic
/// normalization.
inline double adjusted_mutual_information(const std::vector<int>& x, const std::vector<int>& y) {
    const auto c = detail::contingency_table(x, y);
    const double n = static_cast<double>(c.n);

    double mi = 0.0;
    for (std::size_t i = 0; i < c.a.size(); ++i) {
        for (std::size_t j = 0; j < c.b.size(); ++j) {
            const long long nij = c.cells[i][j];
            if (nij > 0) {
                mi += nij / n * std::log(n * nij / (static_cast<double>(c.a[i]) * c.b[j]));
            }
        }
    }
    double ha = 0.0, hb = 0.0;
    for (long long v : c.a) {
        if (v > 0) ha -= v / n * std::log(v / n);
    }
    for (long long v : c.b) {
        if (v > 0) hb -= v / n * std::log(v / n);
    }
    if (ha == 0.0 && hb == 0.0) return 1.0;

    // Expected MI under the hypergeometric permutation model.
    std::vector<double> lg(c.n + 2);
    for (long long v = 0; v <= c.n + 1; ++v) lg[v] = std::lgamma(static_cast<double>(v) + 1.0);
    double emi = 0.0;
    for (long long ai : c.a) {
        for (long long bj : c.b) {
            const long long lo = std::max<long long>(1, ai + bj - c.n);
            const long long hi = std::min(ai, bj);
            for (long long nij = lo; nij <= hi; ++nij) {
                const double log_pmf = lg[ai] + lg[bj] + lg[c.n - ai] + lg[c.n - bj] - lg[c.n] -
                                       lg[nij] - lg[ai - nij] - lg[bj - nij] -
                                       lg[c.n - ai - bj + nij];
                emi += nij / n * std::log(n * nij / (static_cast<double>(ai) * bj)) * std::exp(log_pmf);
            }
        }
    }
    const double denom = 0.5 * (ha + hb) - emi;
    if (std::abs(denom) < 1e-15) return 0.0;
    return (mi - emi) / denom;
}

}  // namespace msimap

#endif
