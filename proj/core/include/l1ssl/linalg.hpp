#pragma once

// Dense and sparse symmetric primitives, the partial eigensolver and the
// conjugate-gradient solver used by every other module.

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace l1ssl {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;

/// Symmetric sparse matrix storing only the upper triangle (row <= col) in
/// CSR form. Explicit zeros are never stored.
class SparseSymMatrix {
public:
    struct Entry {
        Index row;
        Index col;
        double value;
    };

    SparseSymMatrix() = default;

    /// Builds from triplets. Entries may name either triangle; (i,j) and
    /// (j,i) refer to the same slot and naming it twice is an error.
    /// Zero values are dropped.
    static SparseSymMatrix from_entries(Index n, std::vector<Entry> entries);
    static SparseSymMatrix identity(Index n);
    static SparseSymMatrix zero(Index n);
    /// Upper triangle of a dense symmetric matrix; entries with
    /// |a_ij| <= drop_tol are not stored.
    static SparseSymMatrix from_dense(const DenseMatrix& a, double drop_tol = 0.0);

    Index size() const noexcept { return n_; }
    std::size_t stored() const noexcept { return values_.size(); }

    double coeff(Index i, Index j) const;
    Vector diagonal() const;
    DenseMatrix to_dense() const;

    /// Gershgorin bound on the spectral radius.
    double norm_bound() const;

    /// Returns alpha * I + beta * this.
    SparseSymMatrix shifted(double alpha, double beta) const;

    /// Y = A X, X is n x b.
    DenseMatrix multiply(const DenseMatrix& x) const;

    template <class Fn>
    void for_each(Fn&& fn) const {
        for (Index i = 0; i < n_; ++i) {
            for (auto p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) fn(i, cols_[p], values_[p]);
        }
    }

    std::span<const Index> row_ptr() const noexcept { return row_ptr_; }
    std::span<const Index> col_index() const noexcept { return cols_; }
    std::span<const double> values() const noexcept { return values_; }

private:
    Index n_ = 0;
    std::vector<Index> row_ptr_{0};
    std::vector<Index> cols_;
    std::vector<double> values_;
};

/// y = A x, touching each stored entry exactly once.
Vector spmv(const SparseSymMatrix& a, const Vector& x);

struct EigenPairs {
    Vector values;        // ascending
    DenseMatrix vectors;  // n x m, column i pairs with values[i]
    double max_residual = 0.0;
};

struct EigenOptions {
    double tol = 1e-6;               // residual tolerance relative to the norm bound
    std::uint64_t seed = 0;          // start block of the iterative path
    Index dense_threshold = 512;     // n <= threshold (or m >= n/2) uses a dense solve
    Index max_steps = -1;            // block-Krylov steps; -1 means 10 m + 200
};

/// The m algebraically smallest eigenpairs of a symmetric PSD matrix.
/// Throws ConvergenceError if the residual budget is exhausted.
EigenPairs smallest_eigenpairs(const SparseSymMatrix& a, Index m, const EigenOptions& opts = {});

struct CgResult {
    Vector x;
    Index iterations = 0;
    double relative_residual = 0.0;
};

/// Jacobi-preconditioned conjugate gradients. Guarantees
/// ||Ax - b|| <= tol ||b|| on return, otherwise throws ConvergenceError.
CgResult conjugate_gradient(const SparseSymMatrix& a, const Vector& b, double tol,
                            Index max_iters = -1);

inline Vector solve_spd(const SparseSymMatrix& a, const Vector& b, double tol) {
    return conjugate_gradient(a, b, tol).x;
}

}  // namespace l1ssl
