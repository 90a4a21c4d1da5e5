#pragma once

#include <cstdint>

#include "l1ssl/linalg.hpp"

namespace l1ssl {

/// The m smallest eigenpairs of a normalized Laplacian, L = V S V^T.
///
/// Columns of `vectors()` are orthonormal and ordered by ascending
/// eigenvalue. When m == n the basis is `full()` and the symmetric factor
/// B = S^{1/2} V^T is exact, which the smoothness measures below require.
class SpectralBasis {
public:
    /// Validates orthonormality (1e-8) and that eigenvalues are ascending
    /// within [-1e-8, 2 + 1e-8].
    SpectralBasis(DenseMatrix vectors, Vector eigenvalues);

    Index n() const noexcept { return vectors_.rows(); }
    Index m() const noexcept { return vectors_.cols(); }
    bool full() const noexcept { return m() == n(); }

    const DenseMatrix& vectors() const noexcept { return vectors_; }
    const Vector& eigenvalues() const noexcept { return eigenvalues_; }
    /// S_ii^{1/2}, with eigenvalues in [-1e-8, 0) clamped to zero first.
    const Vector& sqrt_eigenvalues() const noexcept { return sqrt_eigenvalues_; }

    /// First m' columns of this basis.
    SpectralBasis truncated(Index m) const;

private:
    DenseMatrix vectors_;
    Vector eigenvalues_;
    Vector sqrt_eigenvalues_;
};

/// The m smallest eigenpairs of L. Deterministic for a
/// fixed seed.
SpectralBasis build_basis(const SparseSymMatrix& laplacian, Index m, std::uint64_t seed = 0,
                          double tol = 1e-6);

/// B f = S^{1/2} V^T f. Throws ConfigError on a truncated basis.
Vector apply_B(const SpectralBasis& basis, const Vector& f);

/// ||B f||_1.
double l1_smoothness(const SpectralBasis& basis, const Vector& f);

/// f^T L f via one sparse product.
double l2_smoothness(const SparseSymMatrix& laplacian, const Vector& f);

struct SmoothnessReport {
    double l2_smoothness = 0.0;  // f^T L f
    double l1_smoothness = 0.0;  // ||B f||_1
    double fitting_error = 0.0;  // ||f - y||_2^2
};

SmoothnessReport smoothness_report(const SpectralBasis& basis, const SparseSymMatrix& laplacian,
                                   const Vector& f, const Vector& y);

}  // namespace l1ssl
