#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "l1ssl/graph.hpp"
#include "l1ssl/linalg.hpp"
#include "l1ssl/solver.hpp"
#include "l1ssl/spectral.hpp"

namespace l1ssl {

struct LabelAssignment {
    Index index;
    int label;

    friend bool operator==(const LabelAssignment&, const LabelAssignment&) = default;
};

/// n x C initial label matrix Y. Built either one-hot from assignments or
/// from nonnegative counts (BOW refinement).
class LabelMatrix {
public:
    static LabelMatrix from_counts(DenseMatrix counts);

    Index samples() const noexcept { return data_.rows(); }
    Index classes() const noexcept { return data_.cols(); }
    const DenseMatrix& data() const noexcept { return data_; }

private:
    explicit LabelMatrix(DenseMatrix data) : data_(std::move(data)) {}
    friend LabelMatrix encode_labels(std::span<const LabelAssignment>, Index, int);

    DenseMatrix data_;
};

/// y_ij = 1 when sample i is labeled with class j, zero rows elsewhere.
LabelMatrix encode_labels(std::span<const LabelAssignment> assignments, Index n, int classes);

struct Solution {
    DenseMatrix scores;               // n x C
    std::vector<int> labels;          // argmax per row, lowest index wins ties
    std::vector<SolverReport> reports;  // one per class column (L1 only)
};

/// Row-wise argmax; ties resolve to the lowest class index.
std::vector<int> argmax_labels(const DenseMatrix& scores);

/// Multi-class L1-SSL: one independent reduced problem per column of Y,
/// scores column j = V_m alpha_j. Columns may be solved on `workers`
/// threads; the result does not depend on the worker count.
Solution l1_ssl_fit(const SpectralBasis& basis, const LabelMatrix& y, const SolverOptions& opts,
                    unsigned workers = 1);

/// Multi-class L2-SSL: scores column j = (I + lambda L)^{-1} Y_j.
Solution l2_ssl_fit(const SparseSymMatrix& laplacian, const LabelMatrix& y, double lambda);

struct NoiseSpec {
    Index labeled_per_class = 5;
    double noise_fraction = 0.0;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Corrupts floor(noise_fraction * count) assignments chosen uniformly
/// without replacement; each gets a class drawn uniformly from the C - 1
/// wrong classes.
std::vector<LabelAssignment> inject_label_noise(std::span<const LabelAssignment> assignments,
                                                const NoiseSpec& noise_spec, int classes);

/// Same corruption rule applied separately inside each class:
/// floor(noise_fraction * count_c) flips per class c.
std::vector<LabelAssignment> inject_label_noise_per_class(std::span<const LabelAssignment> assignments,
                                                          const NoiseSpec& noise_spec, int classes);

/// Draws `per_class` labeled points per class from ground truth, without
/// replacement, and returns them sorted by index.
std::vector<LabelAssignment> sample_labels_per_class(std::span<const int> truth, Index per_class,
                                                     int classes, std::uint64_t seed);

/// Fraction of masked points where prediction equals truth.
double evaluate(std::span<const int> predicted, std::span<const int> truth, const std::vector<bool>& mask);
double evaluate(const Solution& solution, std::span<const int> truth, const std::vector<bool>& mask);

/// Mask selecting every index not present in `assignments`.
std::vector<bool> unlabeled_mask(Index n, std::span<const LabelAssignment> assignments);

struct LabeledDataset {
    FeatureMatrix features;
    std::vector<int> labels;
};

/// n/2 points on each of two interleaved radius-1 half circles (upper arc
/// centered at the origin, lower arc shifted by (1.0, 0.5)), plus isotropic
/// Gaussian noise of standard deviation noise_sd.
LabeledDataset two_moons(Index n, double noise_sd, std::uint64_t seed);

/// Isotropic Gaussian blobs with centers drawn uniformly in [-spread, spread]^dims.
LabeledDataset gaussian_blobs(Index n, int centers, Index dims, double sd, double spread,
                              std::uint64_t seed);

/// Signed two-class target from a C = 2 label matrix: y = Y_0 - Y_1.
Vector signed_target(const LabelMatrix& y);

}  // namespace l1ssl
