#pragma once

#include <cstdint>
#include <string_view>

#include "l1ssl/linalg.hpp"

namespace l1ssl {

/// n samples by d features, one sample per row. All values finite.
class FeatureMatrix {
public:
    FeatureMatrix() = default;
    explicit FeatureMatrix(DenseMatrix data);

    Index samples() const noexcept { return data_.rows(); }
    Index dims() const noexcept { return data_.cols(); }
    const DenseMatrix& data() const noexcept { return data_; }

private:
    DenseMatrix data_;
};

enum class KernelKind { gaussian, linear, precomputed };
enum class Symmetrization { union_of_neighbors, mutual };

std::string_view to_string(KernelKind kind);

struct GraphConfig {
    double sigma = 1.0;
    Index k = 4;
    Symmetrization symmetrization = Symmetrization::union_of_neighbors;

    /// Throws ConfigError unless sigma > 0 and 1 <= k < n.
    void validate(Index n) const;
};

/// Symmetric affinity graph: strictly positive stored weights, zero diagonal.
class WeightMatrix {
public:
    WeightMatrix(SparseSymMatrix inner, KernelKind kind);

    Index size() const noexcept { return inner_.size(); }
    const SparseSymMatrix& matrix() const noexcept { return inner_; }
    KernelKind kind() const noexcept { return kind_; }
    /// Row sums, D_ii = sum_j w_ij.
    Vector degrees() const;

private:
    SparseSymMatrix inner_;
    KernelKind kind_;
};

/// w_ij = exp(-||x_i - x_j||^2 / (2 sigma^2)) for i != j over all pairs.
/// Weights that underflow to zero are not stored.
WeightMatrix gaussian_weights(const FeatureMatrix& x, double sigma);

/// w_ij = <x_i, x_j> for i != j. Requires nonnegative features.
WeightMatrix linear_kernel(const FeatureMatrix& x);

/// Keeps edge (i,j) when j is among the k largest weights of row i (union:
/// or i among j's; mutual: and). Ties go to the lower column index.
WeightMatrix knn_sparsify(const WeightMatrix& w, const GraphConfig& config);

/// Gaussian k-NN graph without the dense kernel. Neighbors are found with a
/// KD-tree; ordering is by distance then index, which matches
/// knn_sparsify(gaussian_weights(x)) whenever kernel values do not tie.
WeightMatrix gaussian_knn_graph(const FeatureMatrix& x, const GraphConfig& config);

/// L = I - D^{-1/2} W D^{-1/2}. Throws GraphError naming the first vertex
/// with zero degree.
SparseSymMatrix normalized_laplacian(const WeightMatrix& w);

/// Exact k nearest neighbors of every point, excluding the point itself.
/// Row i of the result lists neighbor indices by (distance, index).
std::vector<std::vector<Index>> knn_indices(const FeatureMatrix& x, Index k);

}  // namespace l1ssl
