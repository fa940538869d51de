#ifndef MSIMAP_KD_TREE_HPP
#define MSIMAP_KD_TREE_HPP

#include "msimap/common.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <vector>

namespace msimap::detail {

/// Exact k-nearest-neighbor search over the rows of a point matrix.
/// Ties on distance are broken by lower point index, so results are
/// identical to a brute-force scan.
class KdTree {
  public:
    explicit KdTree(const Matrix& points) : points_(points) {
        std::vector<int> idx(points_.rows());
        std::iota(idx.begin(), idx.end(), 0);
        nodes_.reserve(2 * idx.size());
        root_ = build(idx.data(), static_cast<int>(idx.size()), 0);
    }

    /// k nearest neighbors of `query`, excluding `exclude` (pass -1 to keep all).
    /// Returned as (squared distance, index), sorted ascending.
    std::vector<std::pair<double, int>> query(const Vector& q, int k, int exclude) const {
        Heap heap;
        search(root_, q, k, exclude, heap);
        std::vector<std::pair<double, int>> out;
        out.reserve(heap.size());
        while (!heap.empty()) {
            out.push_back(heap.top());
            heap.pop();
        }
        std::sort(out.begin(), out.end(), Closer{});
        return out;
    }

  private:
    struct Node {
        int axis = -1;       // -1 marks a leaf
        double split = 0.0;
        int left = -1, right = -1;
        std::vector<int> points;  // leaf payload
    };

    // Max-heap on (distance, index) so the worst candidate is on top.
    struct Farther {
        bool operator()(const std::pair<double, int>& a, const std::pair<double, int>& b) const {
            return a.first < b.first || (a.first == b.first && a.second < b.second);
        }
    };
    struct Closer {
        bool operator()(const std::pair<double, int>& a, const std::pair<double, int>& b) const {
            return a.first < b.first || (a.first == b.first && a.second < b.second);
        }
    };
    using Heap = std::priority_queue<std::pair<double, int>, std::vector<std::pair<double, int>>, Farther>;

    static constexpr int kLeafSize = 16;

    int build(int* idx, int count, int depth) {
        const int id = static_cast<int>(nodes_.size());
        nodes_.emplace_back();
        if (count <= kLeafSize) {
            nodes_[id].points.assign(idx, idx + count);
            return id;
        }
        const int axis = depth % static_cast<int>(points_.cols());
        int* mid = idx + count / 2;
        std::nth_element(idx, mid, idx + count, [&](int a, int b) {
            return points_(a, axis) < points_(b, axis) || (points_(a, axis) == points_(b, axis) && a < b);
        });
        const double split = points_(*mid, axis);
        const int left = build(idx, count / 2, depth + 1);
        const int right = build(mid, count - count / 2, depth + 1);
        nodes_[id].axis = axis;
        nodes_[id].split = split;
        nodes_[id].left = left;
        nodes_[id].right = right;
        return id;
    }

    void consider(int p, const Vector& q, int k, Heap& heap) const {
        const double d2 = (points_.row(p).transpose() - q).squaredNorm();
        const std::pair<double, int> cand{d2, p};
        if (static_cast<int>(heap.size()) < k) {
            heap.push(cand);
        } else if (Farther{}(cand, heap.top())) {
            heap.pop();
            heap.push(cand);
        }
    }

    void search(int id, const Vector& q, int k, int exclude, Heap& heap) const {
        const Node& node = nodes_[id];
        if (node.axis < 0) {
            for (int p : node.points) {
                if (p != exclude) consider(p, q, k, heap);
            }
            return;
        }
        const double delta = q[node.axis] - node.split;
        const int near = delta < 0 ? node.left : node.right;
        const int far = delta < 0 ? node.right : node.left;
        search(near, q, k, exclude, heap);
        if (static_cast<int>(heap.size()) < k || delta * delta <= heap.top().first) {
            search(far, q, k, exclude, heap);
        }
    }

    const Matrix& points_;
    std::vector<Node> nodes_;
    int root_ = -1;
};

}  // namespace msimap::detail

#endif
