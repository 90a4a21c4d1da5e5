#pragma once

#include <cstdint>
#include <vector>

#include "l1ssl/graph.hpp"
#include "l1ssl/solver.hpp"

namespace l1ssl {

/// n documents by M vocabulary words, nonnegative counts.
class BowMatrix {
public:
    explicit BowMatrix(DenseMatrix counts);

    Index documents() const noexcept { return data_.rows(); }
    Index words() const noexcept { return data_.cols(); }
    const DenseMatrix& data() const noexcept { return data_; }

private:
    DenseMatrix data_;
};

struct RefineConfig {
    double lambda = 0.010;
    double gamma = 0.005;
    Index k = 15;
    Index m = 30;
    /// Clamp refined scores at zero before returning them.
    bool clamp_nonnegative = false;

    void validate(Index n) const;

    static RefineConfig table2_visual() { return {0.010, 0.005, 15, 30, false}; }
    static RefineConfig table2_textual() { return {0.005, 0.075, 15, 35, false}; }
};

struct RefineResult {
    DenseMatrix refined;   // F
    DenseMatrix smoothed;  // Y*, the graph-regularized intermediate
    std::vector<SolverReport> reports;
};

/// F = soft(Y* - Y, gamma) + Y entrywise.
DenseMatrix apply_error_sparsity(const DenseMatrix& y_star, const DenseMatrix& y, double gamma);

/// Two-step refinement of `y` over a graph built from `other`:
///   Y* = argmin 1/2 ||F - Y||^2 + lambda ||B F||_1   (column-wise L1-SSL)
///   F  = soft(Y* - Y, gamma) + Y
/// B comes from the k-NN sparsified linear kernel of `other`. With
/// lambda = 0 the first step is the identity.
RefineResult refine(const BowMatrix& y, const BowMatrix& other, const RefineConfig& cfg,
                    std::uint64_t seed = 0, unsigned workers = 1);

struct CoRefineResult {
    RefineResult visual;
    RefineResult textual;
};

/// Refines each modality against the original of the other.
CoRefineResult co_refine(const BowMatrix& visual, const BowMatrix& textual, const RefineConfig& cfg_visual,
                         const RefineConfig& cfg_textual, std::uint64_t seed = 0, unsigned workers = 1);

}  // namespace l1ssl
