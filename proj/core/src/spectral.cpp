#include "l1ssl/spectral.hpp"

#include <cmath>
#include <string>

#include "l1ssl/error.hpp"

namespace l1ssl {
namespace {

constexpr double kOrthoTol = 1e-8;
constexpr double kEigenSlack = 1e-8;

void require_full(const SpectralBasis& basis, const char* op) {
    if (!basis.full()) {
        throw ConfigError(std::string(op) + " needs the full eigenbasis (m = n); got m = " +
                          std::to_string(basis.m()) + ", n = " + std::to_string(basis.n()));
    }
}

void require_length(const Vector& f, Index n, const char* op) {
    if (f.size() != n) {
        throw DimensionError(std::string(op) + ": vector length " + std::to_string(f.size()) +
                             " != " + std::to_string(n));
    }
}

}  // namespace

SpectralBasis::SpectralBasis(DenseMatrix vectors, Vector eigenvalues)
    : vectors_(std::move(vectors)), eigenvalues_(std::move(eigenvalues)) {
    if (vectors_.cols() != eigenvalues_.size()) {
        throw DimensionError("spectral basis: eigenvalue count does not match column count");
    }
    if (vectors_.cols() < 1 || vectors_.cols() > vectors_.rows()) {
        throw DimensionError("spectral basis: need 1 <= m <= n");
    }
    const DenseMatrix gram = vectors_.transpose() * vectors_;
    const double ortho_err = (gram - DenseMatrix::Identity(m(), m())).cwiseAbs().maxCoeff();
    if (ortho_err > kOrthoTol) {
        throw ConfigError("spectral basis: columns are not orthonormal (error " + std::to_string(ortho_err) + ")");
    }
    sqrt_eigenvalues_.resize(m());
    for (Index i = 0; i < m(); ++i) {
        const double v = eigenvalues_[i];
        if (v < -kEigenSlack || v > 2.0 + kEigenSlack || !std::isfinite(v)) {
            throw ConfigError("spectral basis: eigenvalue " + std::to_string(v) + " outside [0, 2]");
        }
        if (i > 0 && v < eigenvalues_[i - 1]) throw ConfigError("spectral basis: eigenvalues not ascending");
        sqrt_eigenvalues_[i] = std::sqrt(std::max(v, 0.0));
    }
}

SpectralBasis SpectralBasis::truncated(Index m) const {
    if (m < 1 || m > this->m()) throw ConfigError("truncated: m outside [1, current m]");
    return {vectors_.leftCols(m), eigenvalues_.head(m)};
}

SpectralBasis build_basis(const SparseSymMatrix& laplacian, Index m, std::uint64_t seed, double tol) {
    EigenOptions opts;
    opts.seed = seed;
    opts.tol = tol;
    EigenPairs pairs = smallest_eigenpairs(laplacian, m, opts);
    return {std::move(pairs.vectors), std::move(pairs.values)};
}

Vector apply_B(const SpectralBasis& basis, const Vector& f) {
    require_full(basis, "apply_B");
    require_length(f, basis.n(), "apply_B");
    return basis.sqrt_eigenvalues().cwiseProduct(basis.vectors().transpose() * f);
}

double l1_smoothness(const SpectralBasis& basis, const Vector& f) {
    return apply_B(basis, f).lpNorm<1>();
}

double l2_smoothness(const SparseSymMatrix& laplacian, const Vector& f) {
    require_length(f, laplacian.size(), "l2_smoothness");
    return std::max(0.0, f.dot(spmv(laplacian, f)));
}

SmoothnessReport smoothness_report(const SpectralBasis& basis, const SparseSymMatrix& laplacian,
                                   const Vector& f, const Vector& y) {
    require_full(basis, "smoothness_report");
    require_length(y, basis.n(), "smoothness_report");
    SmoothnessReport r;
    r.l2_smoothness = l2_smoothness(laplacian, f);
    r.l1_smoothness = l1_smoothness(basis, f);
    r.fitting_error = (f - y).squaredNorm();
    return r;
}

}  // namespace l1ssl
