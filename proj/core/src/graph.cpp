#include "l1ssl/graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "l1ssl/error.hpp"

namespace l1ssl {

FeatureMatrix::FeatureMatrix(DenseMatrix data) : data_(std::move(data)) {
    if (!data_.allFinite()) throw ConfigError("feature matrix contains non-finite values");
}

std::string_view to_string(KernelKind kind) {
    switch (kind) {
        case KernelKind::gaussian: return "gaussian";
        case KernelKind::linear: return "linear";
        case KernelKind::precomputed: return "precomputed";
    }
    return "unknown";
}

void GraphConfig::validate(Index n) const {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw ConfigError("sigma must be a positive finite number, got " + std::to_string(sigma));
    }
    if (k < 1) throw ConfigError("k must be >= 1, got " + std::to_string(k));
    if (k >= n) {
        throw ConfigError("k = " + std::to_string(k) + " must be smaller than n = " + std::to_string(n));
    }
}

WeightMatrix::WeightMatrix(SparseSymMatrix inner, KernelKind kind)
    : inner_(std::move(inner)), kind_(kind) {
    inner_.for_each([](Index i, Index j, double v) {
        if (i == j) throw ConfigError("weight matrix has a stored diagonal entry at " + std::to_string(i));
        if (!(v > 0.0)) {
            throw ConfigError("weight (" + std::to_string(i) + "," + std::to_string(j) +
                              ") is not strictly positive");
        }
    });
}

Vector WeightMatrix::degrees() const {
    Vector d = Vector::Zero(size());
    inner_.for_each([&](Index i, Index j, double v) {
        d[i] += v;
        d[j] += v;
    });
    return d;
}

WeightMatrix gaussian_weights(const FeatureMatrix& x, double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw ConfigError("sigma must be a positive finite number, got " + std::to_string(sigma));
    }
    const Index n = x.samples();
    if (n < 2) throw ConfigError("gaussian_weights needs at least two samples");
    const DenseMatrix& d = x.data();
    const double scale = 1.0 / (2.0 * sigma * sigma);
    std::vector<SparseSymMatrix::Entry> entries;
    entries.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
    for (Index i = 0; i < n; ++i) {
        for (Index j = i + 1; j < n; ++j) {
            const double w = std::exp(-(d.row(i) - d.row(j)).squaredNorm() * scale);
            if (w > 0.0) entries.push_back({i, j, w});
        }
    }
    return {SparseSymMatrix::from_entries(n, std::move(entries)), KernelKind::gaussian};
}

WeightMatrix linear_kernel(const FeatureMatrix& x) {
    const Index n = x.samples();
    if (n < 1) throw ConfigError("linear_kernel needs at least one sample");
    const DenseMatrix& d = x.data();
    for (Index i = 0; i < n; ++i) {
        for (Index c = 0; c < d.cols(); ++c) {
            if (d(i, c) < 0.0) {
                throw ConfigError("linear_kernel: negative feature at row " + std::to_string(i) +
                                  ", column " + std::to_string(c));
            }
        }
    }
    const DenseMatrix gram = d * d.transpose();
    std::vector<SparseSymMatrix::Entry> entries;
    for (Index i = 0; i < n; ++i) {
        for (Index j = i + 1; j < n; ++j) {
            if (gram(i, j) > 0.0) entries.push_back({i, j, gram(i, j)});
        }
    }
    return {SparseSymMatrix::from_entries(n, std::move(entries)), KernelKind::linear};
}

namespace {

WeightMatrix assemble_from_selection(Index n, const std::vector<std::vector<std::pair<Index, double>>>& picks,
                                     Symmetrization mode, KernelKind kind) {
    // Count how many endpoints selected each edge: 1 or 2.
    std::vector<SparseSymMatrix::Entry> candidates;
    for (Index i = 0; i < n; ++i) {
        for (const auto& [j, w] : picks[static_cast<std::size_t>(i)]) {
            candidates.push_back({std::min(i, j), std::max(i, j), w});
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    std::vector<SparseSymMatrix::Entry> kept;
    for (std::size_t p = 0; p < candidates.size();) {
        std::size_t q = p + 1;
        while (q < candidates.size() && candidates[q].row == candidates[p].row &&
               candidates[q].col == candidates[p].col) {
            ++q;
        }
        const bool both = (q - p) >= 2;
        if (mode == Symmetrization::union_of_neighbors || both) kept.push_back(candidates[p]);
        p = q;
    }
    return {SparseSymMatrix::from_entries(n, std::move(kept)), kind};
}

}  // namespace

WeightMatrix knn_sparsify(const WeightMatrix& w, const GraphConfig& config) {
    const Index n = w.size();
    config.validate(n);
    std::vector<std::vector<std::pair<Index, double>>> rows(static_cast<std::size_t>(n));
    w.matrix().for_each([&](Index i, Index j, double v) {
        rows[static_cast<std::size_t>(i)].emplace_back(j, v);
        rows[static_cast<std::size_t>(j)].emplace_back(i, v);
    });
    const auto k = static_cast<std::size_t>(config.k);
    for (auto& row : rows) {
        auto better = [](const auto& a, const auto& b) {
            return a.second != b.second ? a.second > b.second : a.first < b.first;
        };
        if (row.size() > k) {
            std::partial_sort(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(k), row.end(), better);
            row.resize(k);
        }
    }
    return assemble_from_selection(n, rows, config.symmetrization, w.kind());
}

WeightMatrix gaussian_knn_graph(const FeatureMatrix& x, const GraphConfig& config) {
    const Index n = x.samples();
    config.validate(n);
    const auto neighbors = knn_indices(x, config.k);
    const double scale = 1.0 / (2.0 * config.sigma * config.sigma);
    std::vector<std::vector<std::pair<Index, double>>> picks(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
        for (Index j : neighbors[static_cast<std::size_t>(i)]) {
            const double wij = std::exp(-(x.data().row(i) - x.data().row(j)).squaredNorm() * scale);
            if (wij > 0.0) picks[static_cast<std::size_t>(i)].emplace_back(j, wij);
        }
    }
    return assemble_from_selection(n, picks, config.symmetrization, KernelKind::gaussian);
}

SparseSymMatrix normalized_laplacian(const WeightMatrix& w) {
    const Index n = w.size();
    const Vector deg = w.degrees();
    for (Index i = 0; i < n; ++i) {
        if (!(deg[i] > 0.0)) {
            throw GraphError("vertex " + std::to_string(i) +
                                 " is isolated (zero degree); the normalized Laplacian is undefined",
                             i);
        }
    }
    Vector inv_sqrt = deg.cwiseSqrt().cwiseInverse();
    std::vector<SparseSymMatrix::Entry> entries;
    entries.reserve(w.matrix().stored() + static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) entries.push_back({i, i, 1.0});
    w.matrix().for_each([&](Index i, Index j, double v) {
        entries.push_back({i, j, -v * inv_sqrt[i] * inv_sqrt[j]});
    });
    return SparseSymMatrix::from_entries(n, std::move(entries));
}

}  // namespace l1ssl
