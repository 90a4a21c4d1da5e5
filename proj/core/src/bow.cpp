#include "l1ssl/bow.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "l1ssl/error.hpp"
#include "l1ssl/spectral.hpp"
#include "l1ssl/ssl.hpp"

namespace l1ssl {

BowMatrix::BowMatrix(DenseMatrix counts) : data_(std::move(counts)) {
    if (!data_.allFinite()) throw ConfigError("BOW matrix has non-finite entries");
    for (Index i = 0; i < data_.rows(); ++i) {
        for (Index j = 0; j < data_.cols(); ++j) {
            if (data_(i, j) < 0.0) {
                throw ConfigError("BOW matrix entry (" + std::to_string(i) + "," + std::to_string(j) +
                                  ") is negative");
            }
        }
    }
}

void RefineConfig::validate(Index n) const {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ConfigError("refine: lambda must be >= 0");
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw ConfigError("refine: gamma must be >= 0");
    if (k < 1 || k >= n) {
        throw ConfigError("refine: k = " + std::to_string(k) + " must lie in [1, n-1] for n = " + std::to_string(n));
    }
    if (m < 1 || m > n) {
        throw ConfigError("refine: m = " + std::to_string(m) + " must lie in [1, n] for n = " + std::to_string(n));
    }
}

DenseMatrix apply_error_sparsity(const DenseMatrix& y_star, const DenseMatrix& y, double gamma) {
    if (!(gamma >= 0.0)) throw ConfigError("apply_error_sparsity: gamma must be >= 0");
    if (y_star.rows() != y.rows() || y_star.cols() != y.cols()) {
        throw DimensionError("apply_error_sparsity: shape mismatch");
    }
    // Y + soft(Y* - Y, gamma), written so both limits are exact in floating point.
    DenseMatrix f(y.rows(), y.cols());
    for (Index j = 0; j < y.cols(); ++j)
        for (Index i = 0; i < y.rows(); ++i) {
            const double d = y_star(i, j) - y(i, j);
            if (std::abs(d) <= gamma) {
                f(i, j) = y(i, j);
            } else {
                f(i, j) = d > 0.0 ? y_star(i, j) - gamma : y_star(i, j) + gamma;
            }
        }
    return f;
}

RefineResult refine(const BowMatrix& y, const BowMatrix& other, const RefineConfig& cfg, std::uint64_t seed,
                    unsigned workers) {
    if (y.documents() != other.documents()) {
        throw DimensionError("refine: " + std::to_string(y.documents()) + " documents vs " +
                             std::to_string(other.documents()) + " in the counterpart modality");
    }
    cfg.validate(y.documents());

    RefineResult out;
    if (cfg.lambda == 0.0) {
        out.smoothed = y.data();
    } else {
        GraphConfig graph;
        graph.k = cfg.k;
        const WeightMatrix w = knn_sparsify(linear_kernel(FeatureMatrix(other.data())), graph);
        const SparseSymMatrix lap = normalized_laplacian(w);
        const SpectralBasis basis = build_basis(lap, cfg.m, seed);
        SolverOptions opts;
        opts.lambda = cfg.lambda;
        Solution sol = l1_ssl_fit(basis, LabelMatrix::from_counts(y.data()), opts, workers);
        out.smoothed = std::move(sol.scores);
        out.reports = std::move(sol.reports);
    }
    out.refined = apply_error_sparsity(out.smoothed, y.data(), cfg.gamma);
    if (cfg.clamp_nonnegative) out.refined = out.refined.cwiseMax(0.0);
    return out;
}

CoRefineResult co_refine(const BowMatrix& visual, const BowMatrix& textual, const RefineConfig& cfg_visual,
                         const RefineConfig& cfg_textual, std::uint64_t seed, unsigned workers) {
    if (visual.documents() != textual.documents()) {
        throw DimensionError("co_refine: modalities have " + std::to_string(visual.documents()) + " and " +
                             std::to_string(textual.documents()) + " documents");
    }
    CoRefineResult out;
    out.visual = refine(visual, textual, cfg_visual, seed, workers);
    out.textual = refine(textual, visual, cfg_textual, seed, workers);
    return out;
}

}  // namespace l1ssl
