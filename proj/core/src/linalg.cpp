#include "l1ssl/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "l1ssl/error.hpp"

namespace l1ssl {

SparseSymMatrix SparseSymMatrix::from_entries(Index n, std::vector<Entry> entries) {
    if (n < 1) throw DimensionError("sparse matrix dimension must be >= 1");
    for (auto& e : entries) {
        if (e.row < 0 || e.col < 0 || e.row >= n || e.col >= n) {
            throw DimensionError("entry (" + std::to_string(e.row) + "," + std::to_string(e.col) +
                                 ") outside " + std::to_string(n) + "x" + std::to_string(n));
        }
        if (!std::isfinite(e.value)) throw ConfigError("non-finite matrix entry");
        if (e.row > e.col) std::swap(e.row, e.col);
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    SparseSymMatrix m;
    m.n_ = n;
    m.row_ptr_.assign(static_cast<std::size_t>(n) + 1, 0);
    m.cols_.reserve(entries.size());
    m.values_.reserve(entries.size());
    for (std::size_t k = 0; k < entries.size(); ++k) {
        const auto& e = entries[k];
        if (k > 0 && entries[k - 1].row == e.row && entries[k - 1].col == e.col) {
            throw ConfigError("duplicate entry (" + std::to_string(e.row) + "," +
                              std::to_string(e.col) + ")");
        }
        if (e.value == 0.0) continue;
        m.cols_.push_back(e.col);
        m.values_.push_back(e.value);
        ++m.row_ptr_[static_cast<std::size_t>(e.row) + 1];
    }
    for (Index i = 0; i < n; ++i) m.row_ptr_[i + 1] += m.row_ptr_[i];
    return m;
}

SparseSymMatrix SparseSymMatrix::identity(Index n) {
    std::vector<Entry> e;
    e.reserve(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) e.push_back({i, i, 1.0});
    return from_entries(n, std::move(e));
}

SparseSymMatrix SparseSymMatrix::zero(Index n) { return from_entries(n, {}); }

SparseSymMatrix SparseSymMatrix::from_dense(const DenseMatrix& a, double drop_tol) {
    if (a.rows() != a.cols()) throw DimensionError("from_dense: matrix is not square");
    std::vector<Entry> e;
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = i; j < a.cols(); ++j) {
            if (std::abs(a(i, j)) > drop_tol) e.push_back({i, j, a(i, j)});
        }
    }
    return from_entries(a.rows(), std::move(e));
}

double SparseSymMatrix::coeff(Index i, Index j) const {
    if (i < 0 || j < 0 || i >= n_ || j >= n_) throw DimensionError("coeff: index out of range");
    if (i > j) std::swap(i, j);
    auto first = cols_.begin() + row_ptr_[i];
    auto last = cols_.begin() + row_ptr_[i + 1];
    auto it = std::lower_bound(first, last, j);
    if (it == last || *it != j) return 0.0;
    return values_[static_cast<std::size_t>(it - cols_.begin())];
}

Vector SparseSymMatrix::diagonal() const {
    Vector d = Vector::Zero(n_);
    for_each([&](Index i, Index j, double v) {
        if (i == j) d[i] = v;
    });
    return d;
}

DenseMatrix SparseSymMatrix::to_dense() const {
    DenseMatrix a = DenseMatrix::Zero(n_, n_);
    for_each([&](Index i, Index j, double v) {
        a(i, j) = v;
        a(j, i) = v;
    });
    return a;
}

double SparseSymMatrix::norm_bound() const {
    Vector rows = Vector::Zero(n_);
    for_each([&](Index i, Index j, double v) {
        rows[i] += std::abs(v);
        if (i != j) rows[j] += std::abs(v);
    });
    return n_ > 0 ? rows.maxCoeff() : 0.0;
}

SparseSymMatrix SparseSymMatrix::shifted(double alpha, double beta) const {
    std::vector<Entry> e;
    e.reserve(values_.size() + static_cast<std::size_t>(n_));
    std::vector<bool> has_diag(static_cast<std::size_t>(n_), false);
    for_each([&](Index i, Index j, double v) {
        if (i == j) {
            e.push_back({i, j, alpha + beta * v});
            has_diag[static_cast<std::size_t>(i)] = true;
        } else {
            e.push_back({i, j, beta * v});
        }
    });
    for (Index i = 0; i < n_; ++i) {
        if (!has_diag[static_cast<std::size_t>(i)]) e.push_back({i, i, alpha});
    }
    return from_entries(n_, std::move(e));
}

DenseMatrix SparseSymMatrix::multiply(const DenseMatrix& x) const {
    if (x.rows() != n_) throw DimensionError("multiply: row count mismatch");
    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const RowMajor xr = x;
    RowMajor yr = RowMajor::Zero(n_, x.cols());
    for (Index i = 0; i < n_; ++i) {
        for (auto p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
            const Index j = cols_[p];
            const double v = values_[p];
            yr.row(i).noalias() += v * xr.row(j);
            if (i != j) yr.row(j).noalias() += v * xr.row(i);
        }
    }
    return yr;
}

Vector spmv(const SparseSymMatrix& a, const Vector& x) {
    if (x.size() != a.size()) {
        throw DimensionError("spmv: vector length " + std::to_string(x.size()) +
                             " != matrix dimension " + std::to_string(a.size()));
    }
    Vector y = Vector::Zero(a.size());
    const auto rp = a.row_ptr();
    const auto ci = a.col_index();
    const auto vals = a.values();
    for (Index i = 0; i < a.size(); ++i) {
        double acc = 0.0;
        const double xi = x[i];
        for (auto p = rp[i]; p < rp[i + 1]; ++p) {
            const Index j = ci[p];
            acc += vals[p] * x[j];
            if (j != i) y[j] += vals[p] * xi;
        }
        y[i] += acc;
    }
    return y;
}

CgResult conjugate_gradient(const SparseSymMatrix& a, const Vector& b, double tol,
                            Index max_iters) {
    const Index n = a.size();
    if (b.size() != n) throw DimensionError("conjugate_gradient: rhs length mismatch");
    if (!(tol > 0.0)) throw ConfigError("conjugate_gradient: tol must be positive");
    if (max_iters < 0) max_iters = 10 * n;

    CgResult out;
    out.x = Vector::Zero(n);
    const double bnorm = b.norm();
    if (bnorm == 0.0) return out;

    Vector inv_diag = a.diagonal();
    for (Index i = 0; i < n; ++i) inv_diag[i] = inv_diag[i] > 0.0 ? 1.0 / inv_diag[i] : 1.0;

    Vector r = b;
    Vector z = inv_diag.cwiseProduct(r);
    Vector p = z;
    double rz = r.dot(z);
    double rel = 1.0;
    for (Index it = 0; it < max_iters; ++it) {
        const Vector ap = spmv(a, p);
        const double pap = p.dot(ap);
        if (!(pap > 0.0)) throw ConvergenceError("conjugate_gradient: matrix is not positive definite", rel);
        const double step = rz / pap;
        out.x.noalias() += step * p;
        r.noalias() -= step * ap;
        out.iterations = it + 1;
        rel = r.norm() / bnorm;
        if (rel <= tol) {
            // The recursive residual drifts; confirm against the true one.
            rel = (b - spmv(a, out.x)).norm() / bnorm;
            if (rel <= tol) {
                out.relative_residual = rel;
                return out;
            }
            r = b - spmv(a, out.x);
            z = inv_diag.cwiseProduct(r);
            p = z;
            rz = r.dot(z);
            continue;
        }
        z = inv_diag.cwiseProduct(r);
        const double rz_next = r.dot(z);
        p = z + (rz_next / rz) * p;
        rz = rz_next;
    }
    throw ConvergenceError("conjugate_gradient: iteration budget exhausted", rel);
}

}  // namespace l1ssl
