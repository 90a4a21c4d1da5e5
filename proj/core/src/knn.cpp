// Exact k-nearest-neighbor search over a KD-tree.

#include <algorithm>
#include <numeric>
#include <queue>
#include <string>

#include "l1ssl/error.hpp"
#include "l1ssl/graph.hpp"

namespace l1ssl {
namespace {

constexpr Index kLeafSize = 16;

struct Node {
    Index begin;
    Index end;
    Index split_dim = -1;  // -1 marks a leaf
    double split_value = 0.0;
    int left = -1;
    int right = -1;
};

class KdTree {
public:
    explicit KdTree(const DenseMatrix& points) : pts_(points) {
        order_.resize(static_cast<std::size_t>(pts_.rows()));
        std::iota(order_.begin(), order_.end(), Index{0});
        nodes_.reserve(static_cast<std::size_t>(2 * pts_.rows() / kLeafSize + 2));
        build(0, pts_.rows());
    }

    // Max-heap keyed on (squared distance, index) so the worst candidate is on top.
    using Candidate = std::pair<double, Index>;

    std::vector<Index> query(Index self, Index k) const {
        std::priority_queue<Candidate> heap;
        search(0, self, k, heap);
        std::vector<Index> out(heap.size());
        for (auto it = out.rbegin(); it != out.rend(); ++it) {
            *it = heap.top().second;
            heap.pop();
        }
        return out;
    }

private:
    int build(Index begin, Index end) {
        const int id = static_cast<int>(nodes_.size());
        nodes_.push_back({begin, end});
        if (end - begin <= kLeafSize) return id;

        Index best_dim = 0;
        double best_spread = -1.0;
        for (Index d = 0; d < pts_.cols(); ++d) {
            double lo = pts_(order_[static_cast<std::size_t>(begin)], d);
            double hi = lo;
            for (Index p = begin; p < end; ++p) {
                const double v = pts_(order_[static_cast<std::size_t>(p)], d);
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            if (hi - lo > best_spread) {
                best_spread = hi - lo;
                best_dim = d;
            }
        }
        if (best_spread <= 0.0) return id;  // all points identical: keep as leaf

        const Index mid = begin + (end - begin) / 2;
        auto first = order_.begin() + static_cast<std::ptrdiff_t>(begin);
        std::nth_element(first, order_.begin() + static_cast<std::ptrdiff_t>(mid),
                         order_.begin() + static_cast<std::ptrdiff_t>(end), [&](Index a, Index b) {
                             const double va = pts_(a, best_dim);
                             const double vb = pts_(b, best_dim);
                             return va != vb ? va < vb : a < b;
                         });
        const double split = pts_(order_[static_cast<std::size_t>(mid)], best_dim);
        const int left = build(begin, mid);
        const int right = build(mid, end);
        Node& node = nodes_[static_cast<std::size_t>(id)];
        node.split_dim = best_dim;
        node.split_value = split;
        node.left = left;
        node.right = right;
        return id;
    }

    void search(int id, Index self, Index k, std::priority_queue<Candidate>& heap) const {
        const Node& node = nodes_[static_cast<std::size_t>(id)];
        if (node.split_dim < 0) {
            for (Index p = node.begin; p < node.end; ++p) {
                const Index j = order_[static_cast<std::size_t>(p)];
                if (j == self) continue;
                const Candidate c{(pts_.row(self) - pts_.row(j)).squaredNorm(), j};
                if (static_cast<Index>(heap.size()) < k) {
                    heap.push(c);
                } else if (c < heap.top()) {
                    heap.pop();
                    heap.push(c);
                }
            }
            return;
        }
        const double diff = pts_(self, node.split_dim) - node.split_value;
        const int near = diff < 0.0 ? node.left : node.right;
        const int far = diff < 0.0 ? node.right : node.left;
        search(near, self, k, heap);
        // Points equal to the split value may sit on either side, so the far
        // side is visited on a tie as well.
        if (static_cast<Index>(heap.size()) < k || diff * diff <= heap.top().first) {
            search(far, self, k, heap);
        }
    }

    const DenseMatrix& pts_;
    std::vector<Index> order_;
    std::vector<Node> nodes_;
};

}  // namespace

std::vector<std::vector<Index>> knn_indices(const FeatureMatrix& x, Index k) {
    const Index n = x.samples();
    if (k < 1 || k >= n) {
        throw ConfigError("knn_indices: k = " + std::to_string(k) + " must lie in [1, n-1] for n = " +
                          std::to_string(n));
    }
    const KdTree tree(x.data());
    std::vector<std::vector<Index>> out(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = tree.query(i, k);
    return out;
}

}  // namespace l1ssl
